//! Whole-image orchestration: threshold, label clumps, split each clump, then
//! relabel every cell in canonical order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evaluation::CellRecord;
use crate::geometry::{label_components, BinaryMask, Clump, Pixel};
use crate::raster::{GrayImage, LabelMap};
use crate::splitter::{split_clump, ConfigError, SplitConfig, SplitOutcome, SplitTrace};
use crate::thresholding::{ThresholdConfig, ThresholdError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0} cells do not fit a 16-bit label map")]
    TooManyCells(usize),
    #[error("could not start worker pool: {0}")]
    Workers(String),
}

impl PipelineError {
    pub fn is_unimodal(&self) -> bool {
        matches!(self, PipelineError::Threshold(ThresholdError::Unimodal))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub split: SplitConfig,
    /// Only used for gray inputs.
    pub threshold: ThresholdConfig,
    /// Worker threads for per-clump work; 0 uses all cores, 1 runs inline.
    pub workers: usize,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        self.split.validate()?;
        self.threshold.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum PipelineInput {
    Gray(GrayImage),
    Mask(BinaryMask),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationResult {
    /// Labelled `1..=n` in order of (centroid y, centroid x).
    pub cells: Vec<CellRecord>,
    pub label_map: LabelMap,
    /// One trace per top-level clump, in clump label order.
    pub traces: Vec<SplitTrace>,
    /// Foreground pixels removed by cut lines, raster order.
    pub cut_pixels: Vec<Pixel>,
    /// The foreground the splitter started from.
    pub mask: BinaryMask,
    /// Threshold used for gray inputs.
    pub threshold: Option<u8>,
    pub config: PipelineConfig,
}

impl SegmentationResult {
    pub fn clump_count(&self) -> usize {
        self.traces.len()
    }
}

pub fn run(input: &PipelineInput, config: &PipelineConfig) -> Result<SegmentationResult, PipelineError> {
    config.validate()?;
    let (mask, threshold) = match input {
        PipelineInput::Gray(image) => {
            let (mask, t) = config.threshold.segment(image)?;
            (mask, Some(t))
        }
        PipelineInput::Mask(mask) => (mask.clone(), None),
    };

    let clumps = label_components(&mask);
    let outcomes = split_all(&clumps, &config.split, config.workers)?;

    let mut cells: Vec<Clump> = Vec::new();
    let mut traces = Vec::with_capacity(outcomes.len());
    let mut cut_pixels = Vec::new();
    for outcome in outcomes {
        cells.extend(outcome.cells);
        cut_pixels.extend(outcome.cut_pixels);
        traces.push(outcome.trace);
    }
    cut_pixels.sort_unstable_by_key(|p| (p.y, p.x));

    // Canonical order; the first pixel breaks exact centroid ties.
    cells.sort_by(|a, b| {
        a.centroid
            .y
            .total_cmp(&b.centroid.y)
            .then(a.centroid.x.total_cmp(&b.centroid.x))
            .then_with(|| (a.pixels[0].y, a.pixels[0].x).cmp(&(b.pixels[0].y, b.pixels[0].x)))
    });
    if cells.len() > usize::from(u16::MAX) {
        return Err(PipelineError::TooManyCells(cells.len()));
    }

    let mut label_map = LabelMap::new(mask.width(), mask.height()).expect("mask dimensions are valid");
    let cells: Vec<CellRecord> = cells
        .into_iter()
        .zip(1u16..)
        .map(|(mut cell, label)| {
            for &p in &cell.pixels {
                label_map.set(p, label);
            }
            cell.label = u32::from(label);
            CellRecord::from(cell)
        })
        .collect();

    Ok(SegmentationResult {
        cells,
        label_map,
        traces,
        cut_pixels,
        mask,
        threshold,
        config: *config,
    })
}

fn split_all(
    clumps: &[Clump],
    config: &SplitConfig,
    workers: usize,
) -> Result<Vec<SplitOutcome>, PipelineError> {
    match workers {
        1 => Ok(clumps.iter().map(|c| split_clump(c, config)).collect()),
        0 => Ok(clumps.par_iter().map(|c| split_clump(c, config)).collect()),
        n => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| PipelineError::Workers(e.to_string()))?;
            Ok(pool.install(|| clumps.par_iter().map(|c| split_clump(c, config)).collect()))
        }
    }
}
