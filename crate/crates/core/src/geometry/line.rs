use super::{
    components::{count_regions, Connectivity},
    BinaryMask, GeometryError, Pixel,
};

/// Bresenham segment from `p1` to `p2`, both endpoints included.
pub fn bresenham(p1: Pixel, p2: Pixel) -> Vec<Pixel> {
    let dx = (p2.x - p1.x).abs();
    let dy = -(p2.y - p1.y).abs();
    let sx = if p1.x < p2.x { 1 } else { -1 };
    let sy = if p1.y < p2.y { 1 } else { -1 };
    let mut err = dx + dy;
    let (mut x, mut y) = (p1.x, p1.y);
    let mut out = Vec::with_capacity((dx.max(-dy) + 1) as usize);
    loop {
        out.push(Pixel::new(x, y));
        if x == p2.x && y == p2.y {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
    out
}

/// Segment pixels at the given thickness. Thickness 2 adds the neighbour across
/// the minor axis (below for x-major segments, right for y-major ones), which
/// makes the stroke 4-connected and therefore a barrier for 8-connected regions.
pub fn thick_segment(p1: Pixel, p2: Pixel, thickness: u32) -> Vec<Pixel> {
    let base = bresenham(p1, p2);
    if thickness <= 1 {
        return base;
    }
    let x_major = (p2.x - p1.x).abs() >= (p2.y - p1.y).abs();
    let mut out = Vec::with_capacity(base.len() * thickness as usize);
    for p in base {
        for k in 0..thickness as i32 {
            out.push(if x_major {
                Pixel::new(p.x, p.y + k)
            } else {
                Pixel::new(p.x + k, p.y)
            });
        }
    }
    out
}

/// Result of a successful cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub mask: BinaryMask,
    /// Foreground pixels that were switched to background.
    pub removed: Vec<Pixel>,
    pub thickness: u32,
}

/// Clears the segment `p1`→`p2` from `mask`. A 1-pixel Bresenham stroke is tried
/// first; if the foreground does not fall apart into at least two 8-connected
/// components, the cut is retried once at thickness 2.
///
/// `mask` is expected to hold the clump being cut and nothing else.
pub fn cut_line(mask: &BinaryMask, p1: Pixel, p2: Pixel) -> Result<Cut, GeometryError> {
    for p in [p1, p2] {
        if !mask.contains(p) {
            return Err(GeometryError::OutOfBounds {
                x: p.x,
                y: p.y,
                width: mask.width(),
                height: mask.height(),
            });
        }
    }
    for thickness in [1, 2] {
        let mut out = mask.clone();
        let mut removed = Vec::new();
        for p in thick_segment(p1, p2, thickness) {
            if out.get(p) {
                out.set(p, false);
                removed.push(p);
            }
        }
        if count_regions(&out, Connectivity::Eight) >= 2 {
            removed.sort_unstable_by_key(|p| (p.y, p.x));
            return Ok(Cut {
                mask: out,
                removed,
                thickness,
            });
        }
    }
    Err(GeometryError::CutIneffective)
}
