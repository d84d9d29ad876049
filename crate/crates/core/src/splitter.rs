//! Recursive clump separation.
//!
//! A clump whose hull-minus-clump difference has fewer than two concave parts is
//! a single cell. Otherwise bottleneck candidates are taken from the SDD extrema
//! of its radial signature, kept only if they touch one of the two largest
//! concave parts, and the closest pair drawn from different parts is joined by a
//! cut. Each resulting piece goes through the same procedure again.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    bounds, connected_regions, cut_line, local_concave_parts, trace_pixels, BinaryMask, Clump,
    ConcavePart, Connectivity, Pixel,
};
use crate::sdd::{back_project, RadialBoundary, SddProfile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("bandwidth must be at least 1")]
    Bandwidth,
    #[error("half window must be at least 2, got {0}")]
    HalfWindow(usize),
    #[error("prominence floor must lie in [0, 1], got {0}")]
    ProminenceFloor(f64),
    #[error("minimum concave area fraction must lie in [0, 1], got {0}")]
    ConcaveFraction(f64),
    #[error("max depth must be at least 1")]
    MaxDepth,
}

/// Noise filter for concave parts: a part needs at least
/// `max(pixels, ceil(fraction * clump area))` pixels to count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinConcaveArea {
    pub pixels: usize,
    pub fraction: f64,
}

impl MinConcaveArea {
    pub fn for_area(&self, clump_area: usize) -> usize {
        let relative = (self.fraction * clump_area as f64).ceil() as usize;
        self.pixels.max(relative).max(1)
    }
}

impl Default for MinConcaveArea {
    fn default() -> Self {
        Self {
            pixels: 3,
            fraction: 0.005,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitConfig {
    /// Low-pass bandwidth `W`: DFT bins kept on each side of DC.
    pub bandwidth: usize,
    /// Samples per side used for the slope fits.
    pub half_window: usize,
    /// Extrema weaker than this fraction of the strongest are ignored.
    pub prominence_floor: f64,
    pub min_concave_area: MinConcaveArea,
    /// Maximum number of nested cuts.
    pub max_depth: usize,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            bandwidth: 50,
            half_window: 5,
            prominence_floor: 0.05,
            min_concave_area: MinConcaveArea::default(),
            max_depth: 32,
        }
    }
}

impl SplitConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.bandwidth == 0 {
            return Err(ConfigError::Bandwidth);
        }
        if self.half_window < 2 {
            return Err(ConfigError::HalfWindow(self.half_window));
        }
        if !(0.0..=1.0).contains(&self.prominence_floor) {
            return Err(ConfigError::ProminenceFloor(self.prominence_floor));
        }
        if !(0.0..=1.0).contains(&self.min_concave_area.fraction) {
            return Err(ConfigError::ConcaveFraction(self.min_concave_area.fraction));
        }
        if self.max_depth == 0 {
            return Err(ConfigError::MaxDepth);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Single { q: usize },
    /// The two largest concave parts, largest first.
    Overlapped { q: usize, parts: Box<[ConcavePart; 2]> },
}

impl Classification {
    pub fn q(&self) -> usize {
        match self {
            Classification::Single { q } | Classification::Overlapped { q, .. } => *q,
        }
    }
}

/// `Q < 2` concave parts means a single cell; otherwise the two largest parts
/// are returned.
pub fn classify(clump: &Clump, config: &SplitConfig) -> Classification {
    let min_area = config.min_concave_area.for_area(clump.area());
    let set = local_concave_parts(&clump.pixels, min_area);
    let q = set.count();
    if q < 2 {
        return Classification::Single { q };
    }
    let mut parts = set.parts.into_iter();
    let first = parts.next().expect("q >= 2");
    let second = parts.next().expect("q >= 2");
    Classification::Overlapped {
        q,
        parts: Box::new([first, second]),
    }
}

/// Candidates touching (within one pixel of) either part, grouped by part. A
/// candidate touching both goes to the first.
pub fn validate_bottlenecks(candidates: &[Pixel], parts: &[ConcavePart; 2]) -> [Vec<Pixel>; 2] {
    let mut groups = [Vec::new(), Vec::new()];
    for &c in candidates {
        if parts[0].touches(c) {
            groups[0].push(c);
        } else if parts[1].touches(c) {
            groups[1].push(c);
        }
    }
    groups
}

/// Closest pair with one point from each group. Ties go to the lowest
/// `(index in group 0, index in group 1)`.
pub fn choose_pair(groups: &[Vec<Pixel>; 2]) -> Option<(Pixel, Pixel)> {
    let mut best: Option<(i64, Pixel, Pixel)> = None;
    for &a in &groups[0] {
        for &b in &groups[1] {
            let d = a.dist2(b);
            if best.is_none_or(|(bd, _, _)| d < bd) {
                best = Some((d, a, b));
            }
        }
    }
    best.map(|(_, a, b)| (a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalReason {
    /// Fewer than two concave parts, or a contour too short for the slope fits.
    SingleCell,
    NoValidPair,
    CutIneffective,
    MaxDepth,
}

/// What happened to one clump examined during a split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// Position of this record in the trace.
    pub node: usize,
    pub parent: Option<usize>,
    /// Label of the top-level clump this record descends from.
    pub clump_label: u32,
    pub depth: usize,
    pub area: usize,
    pub q: usize,
    pub candidates: Vec<Pixel>,
    pub validated: [Vec<Pixel>; 2],
    pub chosen_pair: Option<(Pixel, Pixel)>,
    pub cut_applied: bool,
    /// `None` when the clump was cut.
    pub reason: Option<TerminalReason>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SplitTrace {
    pub steps: Vec<StepRecord>,
}

impl SplitTrace {
    pub fn cuts(&self) -> usize {
        self.steps.iter().filter(|s| s.cut_applied).count()
    }

    pub fn hit_max_depth(&self) -> bool {
        self.steps
            .iter()
            .any(|s| s.reason == Some(TerminalReason::MaxDepth))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitOutcome {
    /// Final cells in depth-first order, labelled `1..`.
    pub cells: Vec<Clump>,
    /// Pixels removed by cut lines.
    pub cut_pixels: Vec<Pixel>,
    pub trace: SplitTrace,
}

/// Separates one clump into cells. Only the clump's own pixels are considered.
/// Every failure mode returns the offending piece unsplit with its reason in
/// the trace.
pub fn split_clump(clump: &Clump, config: &SplitConfig) -> SplitOutcome {
    let mut state = SplitState {
        config,
        root_label: clump.label,
        cells: Vec::new(),
        cut_pixels: Vec::new(),
        trace: SplitTrace::default(),
    };
    state.visit(clump.clone(), None, 0);
    let SplitState {
        mut cells,
        mut cut_pixels,
        trace,
        ..
    } = state;
    for (cell, label) in cells.iter_mut().zip(1u32..) {
        cell.label = label;
    }
    cut_pixels.sort_unstable_by_key(|p| (p.y, p.x));
    SplitOutcome {
        cells,
        cut_pixels,
        trace,
    }
}

struct SplitState<'a> {
    config: &'a SplitConfig,
    root_label: u32,
    cells: Vec<Clump>,
    cut_pixels: Vec<Pixel>,
    trace: SplitTrace,
}

impl SplitState<'_> {
    fn visit(&mut self, clump: Clump, parent: Option<usize>, depth: usize) {
        let node = self.trace.steps.len();
        let mut record = StepRecord {
            node,
            parent,
            clump_label: self.root_label,
            depth,
            area: clump.area(),
            q: 0,
            candidates: Vec::new(),
            validated: [Vec::new(), Vec::new()],
            chosen_pair: None,
            cut_applied: false,
            reason: None,
        };
        match self.examine(&clump, depth, &mut record) {
            Ok(daughters) => {
                record.cut_applied = true;
                self.trace.steps.push(record);
                for d in daughters {
                    self.visit(d, Some(node), depth + 1);
                }
            }
            Err(reason) => {
                record.reason = Some(reason);
                self.trace.steps.push(record);
                self.cells.push(clump);
            }
        }
    }

    /// Daughters of a successful cut, or the reason the clump is final.
    fn examine(
        &mut self,
        clump: &Clump,
        depth: usize,
        record: &mut StepRecord,
    ) -> Result<Vec<Clump>, TerminalReason> {
        let config = self.config;
        let classification = classify(clump, config);
        record.q = classification.q();
        let Classification::Overlapped { parts, .. } = classification else {
            return Err(TerminalReason::SingleCell);
        };
        if depth >= config.max_depth {
            return Err(TerminalReason::MaxDepth);
        }

        let contour = trace_pixels(&clump.pixels);
        if contour.len() < 2 * config.half_window + 1 {
            return Err(TerminalReason::SingleCell);
        }
        let boundary = RadialBoundary::new(contour, clump.centroid, config.bandwidth);
        let profile = SddProfile::compute(
            &boundary.smoothed,
            config.half_window,
            config.prominence_floor,
        )
        .expect("window checked above");
        record.candidates = back_project(&profile.extremum_indices(), &boundary.contour)
            .expect("extrema index the contour");

        record.validated = validate_bottlenecks(&record.candidates, &parts);
        let Some((p1, p2)) = choose_pair(&record.validated) else {
            return Err(TerminalReason::NoValidPair);
        };
        record.chosen_pair = Some((p1, p2));

        let (lo, hi) = bounds(&clump.pixels);
        let local = |p: Pixel| Pixel::new(p.x - lo.x, p.y - lo.y);
        let mask = BinaryMask::from_pixels(
            (hi.x - lo.x + 1) as usize,
            (hi.y - lo.y + 1) as usize,
            clump.pixels.iter().map(|&p| local(p)),
        )
        .expect("pixels lie inside their bounds");
        let cut = cut_line(&mask, local(p1), local(p2))
            .map_err(|_| TerminalReason::CutIneffective)?;

        let global = |p: Pixel| Pixel::new(p.x + lo.x, p.y + lo.y);
        self.cut_pixels.extend(cut.removed.iter().map(|&p| global(p)));
        Ok(connected_regions(&cut.mask, Connectivity::Eight)
            .into_iter()
            .map(|region| {
                Clump::new(0, region.into_iter().map(global).collect())
                    .expect("regions are nonempty")
            })
            .collect())
    }
}
