use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::geometry::{centroid, Clump, Pixel, Point};
use crate::raster::LabelMap;

/// A final labelled cell and its centroid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub label: u32,
    pub pixels: Vec<Pixel>,
    pub centroid: Point,
}

impl CellRecord {
    pub fn new(label: u32, pixels: Vec<Pixel>) -> Result<Self, EvalError> {
        let centroid = centroid(&pixels).map_err(|_| EvalError::EmptyCell(label))?;
        Ok(Self {
            label,
            pixels,
            centroid,
        })
    }

    pub fn area(&self) -> usize {
        self.pixels.len()
    }

    /// One record per nonzero label present in the map.
    pub fn from_label_map(map: &LabelMap) -> Vec<CellRecord> {
        map.regions()
            .into_iter()
            .zip(1u32..)
            .filter(|(pixels, _)| !pixels.is_empty())
            .map(|(pixels, label)| CellRecord::new(label, pixels).expect("nonempty"))
            .collect()
    }
}

impl From<Clump> for CellRecord {
    fn from(c: Clump) -> Self {
        Self {
            label: c.label,
            pixels: c.pixels,
            centroid: c.centroid,
        }
    }
}

/// The five counts behind the visual-accuracy score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MatchCounts {
    pub n_segment: u64,
    pub n_split: u64,
    pub n_merge: u64,
    pub n_add: u64,
    pub n_missing: u64,
}

impl MatchCounts {
    pub fn new(n_segment: u64, n_split: u64, n_merge: u64, n_add: u64, n_missing: u64) -> Self {
        Self {
            n_segment,
            n_split,
            n_merge,
            n_add,
            n_missing,
        }
    }

    pub fn total(&self) -> u64 {
        self.n_segment + self.n_split + self.n_merge + self.n_add + self.n_missing
    }

    pub fn vac(&self) -> Result<f64, EvalError> {
        vac(self)
    }
}

impl std::ops::Add for MatchCounts {
    type Output = MatchCounts;

    fn add(self, o: MatchCounts) -> MatchCounts {
        MatchCounts::new(
            self.n_segment + o.n_segment,
            self.n_split + o.n_split,
            self.n_merge + o.n_merge,
            self.n_add + o.n_add,
            self.n_missing + o.n_missing,
        )
    }
}

impl std::iter::Sum for MatchCounts {
    fn sum<I: Iterator<Item = MatchCounts>>(iter: I) -> Self {
        iter.fold(MatchCounts::default(), |a, b| a + b)
    }
}

/// Counts together with the resulting score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VacReport {
    #[serde(flatten)]
    pub counts: MatchCounts,
    pub vac: f64,
}

impl VacReport {
    pub fn from_counts(counts: MatchCounts) -> Result<Self, EvalError> {
        Ok(Self {
            counts,
            vac: vac(&counts)?,
        })
    }
}

/// `n_segment / (n_segment + n_split + n_merge + n_add + n_missing)`.
pub fn vac(counts: &MatchCounts) -> Result<f64, EvalError> {
    let total = counts.total();
    if total == 0 {
        return Err(EvalError::EmptyEvaluation);
    }
    Ok(counts.n_segment as f64 / total as f64)
}

/// Minimum intersection-over-union for a prediction to claim a truth cell.
pub const IOU_LINK: f64 = 0.5;

/// Prediction/truth correspondence.
///
/// Prediction `p` links to truth `t` when their IoU is at least 0.5 or the
/// rounded centroid of `p` falls inside `t`. Then:
/// * a truth with exactly one partner, whose partner has exactly one truth, is segmented;
/// * a truth with `k >= 2` partners adds `k - 1` splits;
/// * a prediction linked to `k >= 2` truths adds `k - 1` merges;
/// * an unlinked prediction is an addition, an unlinked truth is missing.
pub fn match_cells(predicted: &[CellRecord], truth: &LabelMap) -> Result<MatchCounts, EvalError> {
    let (w, h) = (truth.width() as i32, truth.height() as i32);
    let truth_regions = truth.regions();
    let truth_area = |t: u16| truth_regions[t as usize - 1].len();

    let mut truth_partners: BTreeMap<u16, usize> = truth_regions
        .iter()
        .zip(1u16..)
        .filter(|(r, _)| !r.is_empty())
        .map(|(_, t)| (t, 0))
        .collect();
    let mut counts = MatchCounts::default();
    let mut pred_links = Vec::with_capacity(predicted.len());

    for p in predicted {
        let mut overlap: BTreeMap<u16, usize> = BTreeMap::new();
        for &px in &p.pixels {
            if px.x < 0 || px.y < 0 || px.x >= w || px.y >= h {
                return Err(EvalError::DimensionMismatch {
                    expected: (truth.width(), truth.height()),
                    pixel: (px.x, px.y),
                });
            }
            let t = truth.get(px);
            if t != 0 {
                *overlap.entry(t).or_default() += 1;
            }
        }
        let centre = Pixel::new(p.centroid.x.round() as i32, p.centroid.y.round() as i32);
        let centre_label = truth.get(centre);

        let mut linked: Vec<u16> = overlap
            .iter()
            .filter(|&(&t, &inter)| {
                let union = p.area() + truth_area(t) - inter;
                inter as f64 / union as f64 >= IOU_LINK
            })
            .map(|(&t, _)| t)
            .collect();
        if centre_label != 0 && !linked.contains(&centre_label) {
            linked.push(centre_label);
        }
        for t in &linked {
            *truth_partners.get_mut(t).expect("linked truth exists") += 1;
        }
        pred_links.push(linked);
    }

    for links in &pred_links {
        match links.len() {
            0 => counts.n_add += 1,
            1 => {}
            k => counts.n_merge += (k - 1) as u64,
        }
    }
    for (&t, &partners) in &truth_partners {
        match partners {
            0 => counts.n_missing += 1,
            1 => {
                let sole = pred_links
                    .iter()
                    .find(|links| links.contains(&t))
                    .expect("one partner");
                if sole.len() == 1 {
                    counts.n_segment += 1;
                }
            }
            k => counts.n_split += (k - 1) as u64,
        }
    }
    Ok(counts)
}

/// [`match_cells`] on two label maps of the same size.
pub fn match_label_maps(predicted: &LabelMap, truth: &LabelMap) -> Result<MatchCounts, EvalError> {
    if (predicted.width(), predicted.height()) != (truth.width(), truth.height()) {
        return Err(EvalError::SizeMismatch {
            predicted: (predicted.width(), predicted.height()),
            truth: (truth.width(), truth.height()),
        });
    }
    match_cells(&CellRecord::from_label_map(predicted), truth)
}
