//! Scoring against ground truth and synthetic test scenes.

mod matching;
mod synth;

pub use matching::{
    match_cells, match_label_maps, vac, CellRecord, MatchCounts, VacReport, IOU_LINK,
};
pub use synth::{generate_scene, EllipseSpec, SceneParams, SyntheticScene};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("empty evaluation")]
    EmptyEvaluation,
    #[error("cell {0} has no pixels")]
    EmptyCell(u32),
    #[error("predicted pixel {pixel:?} lies outside the {}x{} truth map", expected.0, expected.1)]
    DimensionMismatch {
        expected: (usize, usize),
        pixel: (i32, i32),
    },
    #[error("label maps differ in size: predicted {}x{}, truth {}x{}", predicted.0, predicted.1, truth.0, truth.1)]
    SizeMismatch {
        predicted: (usize, usize),
        truth: (usize, usize),
    },
    #[error("invalid scene parameters")]
    InvalidSceneParams,
    #[error("could not place the ellipses after {attempts} attempts")]
    InfeasiblePacking { attempts: usize },
}
