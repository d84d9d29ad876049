use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{BinaryMask, GeometryError, Pixel, Point};

/// Pixel adjacency used when grouping pixels into regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    pub fn offsets(self) -> &'static [(i32, i32)] {
        match self {
            Connectivity::Four => &[(1, 0), (0, 1), (-1, 0), (0, -1)],
            Connectivity::Eight => &[
                (1, 0),
                (1, 1),
                (0, 1),
                (-1, 1),
                (-1, 0),
                (-1, -1),
                (0, -1),
                (1, -1),
            ],
        }
    }
}

/// One connected foreground component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clump {
    pub label: u32,
    /// Raster order (row, then column).
    pub pixels: Vec<Pixel>,
    pub centroid: Point,
}

impl Clump {
    /// Sorts `pixels` into raster order and computes the centroid.
    pub fn new(label: u32, mut pixels: Vec<Pixel>) -> Result<Self, GeometryError> {
        sort_raster(&mut pixels);
        let centroid = centroid(&pixels)?;
        Ok(Self {
            label,
            pixels,
            centroid,
        })
    }

    pub fn area(&self) -> usize {
        self.pixels.len()
    }

    /// Inclusive bounding box `(min, max)`.
    pub fn bounds(&self) -> (Pixel, Pixel) {
        bounds(&self.pixels)
    }
}

/// Component-wise mean of the coordinates.
pub fn centroid(pixels: &[Pixel]) -> Result<Point, GeometryError> {
    if pixels.is_empty() {
        return Err(GeometryError::EmptyClump);
    }
    let (sx, sy) = pixels.iter().fold((0i64, 0i64), |(sx, sy), p| {
        (sx + i64::from(p.x), sy + i64::from(p.y))
    });
    let n = pixels.len() as f64;
    Ok(Point::new(sx as f64 / n, sy as f64 / n))
}

pub(crate) fn sort_raster(pixels: &mut [Pixel]) {
    pixels.sort_unstable_by_key(|p| (p.y, p.x));
}

/// Inclusive bounding box. Panics on an empty slice.
pub(crate) fn bounds(pixels: &[Pixel]) -> (Pixel, Pixel) {
    let first = pixels[0];
    pixels.iter().fold((first, first), |(lo, hi), p| {
        (
            Pixel::new(lo.x.min(p.x), lo.y.min(p.y)),
            Pixel::new(hi.x.max(p.x), hi.y.max(p.y)),
        )
    })
}

/// Groups the foreground of `mask` into maximal connected regions. Regions are
/// returned in raster-scan discovery order, pixels within a region in raster order.
pub fn connected_regions(mask: &BinaryMask, connectivity: Connectivity) -> Vec<Vec<Pixel>> {
    let (w, h) = (mask.width(), mask.height());
    let mut seen = vec![false; w * h];
    let mut regions = Vec::new();
    let mut queue = VecDeque::new();

    for (start, &fg) in mask.data().iter().enumerate() {
        if !fg || seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut region = Vec::new();
        while let Some(idx) = queue.pop_front() {
            let p = Pixel::new((idx % w) as i32, (idx / w) as i32);
            region.push(p);
            for &(dx, dy) in connectivity.offsets() {
                let q = Pixel::new(p.x + dx, p.y + dy);
                if !mask.contains(q) {
                    continue;
                }
                let qi = q.y as usize * w + q.x as usize;
                if mask.data()[qi] && !seen[qi] {
                    seen[qi] = true;
                    queue.push_back(qi);
                }
            }
        }
        sort_raster(&mut region);
        regions.push(region);
    }
    regions
}

/// Number of connected foreground regions.
pub fn count_regions(mask: &BinaryMask, connectivity: Connectivity) -> usize {
    connected_regions(mask, connectivity).len()
}

/// Maximal 8-connected foreground components, labelled `1..=K` in raster-scan
/// discovery order.
pub fn label_components(mask: &BinaryMask) -> Vec<Clump> {
    connected_regions(mask, Connectivity::Eight)
        .into_iter()
        .zip(1u32..)
        .map(|(pixels, label)| Clump::new(label, pixels).expect("regions are nonempty"))
        .collect()
}
