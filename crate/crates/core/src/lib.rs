//! Separation of overlapped blobs ("clumps") in binary masks.
//!
//! Each clump is reduced to a one-dimensional radial signature (distance from
//! its centroid to every exterior boundary point), low-pass filtered in the DFT
//! domain, and scanned with a slope difference distribution (SDD): the
//! difference between least-squares slopes fitted on the right and left of each
//! sample. SDD extrema mark candidate bottleneck points. Candidates adjacent to
//! the two largest concave parts of the clump survive, the closest cross-part
//! pair is joined by a cut line, and the daughters are processed again until no
//! clump has two concave parts.
//!
//! ```text
//! gray image -> thresholding -> label clumps -> splitter (per clump) -> relabel -> cells
//! ```
//!
//! The [`evaluation`] module scores a segmentation against a ground-truth label
//! map with the visual-accuracy (VAC) count metric and generates synthetic
//! overlapping-ellipse scenes.

pub mod evaluation;
pub mod geometry;
pub mod pipeline;
pub mod raster;
pub mod sdd;
pub mod splitter;
pub mod thresholding;

pub use evaluation::{
    generate_scene, match_cells, vac, CellRecord, EllipseSpec, EvalError, MatchCounts,
    SceneParams, SyntheticScene, VacReport,
};
pub use geometry::{BinaryMask, Clump, Contour, GeometryError, Pixel, Point};
pub use pipeline::{run, PipelineConfig, PipelineError, PipelineInput, SegmentationResult};
pub use raster::{GrayImage, LabelMap, RasterError};
pub use sdd::{RadialBoundary, SddError, SddProfile};
pub use splitter::{split_clump, SplitConfig, SplitOutcome, SplitTrace, TerminalReason};
pub use thresholding::{ThresholdConfig, ThresholdError, ThresholdMethod};
