//! Binary-mask primitives: connected components, centroids, exterior contour
//! tracing, convex hulls, concave parts and line cuts.
//!
//! Foreground regions use 8-connectivity, background regions (concave parts)
//! use 4-connectivity.

mod components;
mod contour;
mod hull;
mod line;
mod mask;

pub use components::{
    centroid, connected_regions, count_regions, label_components, Clump, Connectivity,
};
pub use contour::{trace_contour, Contour};
pub use hull::{concave_parts, convex_hull, convex_hull_mask, ConcavePart, ConcaveSet};
pub use line::{bresenham, cut_line, thick_segment, Cut};
pub use mask::{BinaryMask, Pixel, Point};

pub(crate) use components::bounds;
pub(crate) use contour::trace_pixels;
pub(crate) use hull::local_concave_parts;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("empty clump")]
    EmptyClump,
    #[error("mask dimensions must be positive, got {width}x{height}")]
    EmptyDimensions { width: usize, height: usize },
    #[error("mask data has {actual} cells, expected {expected}")]
    DataLength { expected: usize, actual: usize },
    #[error("pixel ({x}, {y}) outside {width}x{height} mask")]
    OutOfBounds {
        x: i32,
        y: i32,
        width: usize,
        height: usize,
    },
    #[error("cut ineffective")]
    CutIneffective,
}
