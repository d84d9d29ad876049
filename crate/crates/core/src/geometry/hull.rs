use serde::{Deserialize, Serialize};

use super::{
    components::{bounds, connected_regions, Connectivity},
    BinaryMask, Clump, Pixel,
};

fn cross(o: Pixel, a: Pixel, b: Pixel) -> i64 {
    (i64::from(a.x) - i64::from(o.x)) * (i64::from(b.y) - i64::from(o.y))
        - (i64::from(a.y) - i64::from(o.y)) * (i64::from(b.x) - i64::from(o.x))
}

/// Convex hull of pixel centres by Andrew's monotone chain. Collinear points are
/// dropped; the result has 1 vertex for a single point and 2 for a segment.
pub fn convex_hull(points: &[Pixel]) -> Vec<Pixel> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Pixel> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Inclusive point-in-convex-polygon test, exact in integer arithmetic. `hull` is
/// in the order produced by [`convex_hull`].
fn inside_hull(hull: &[Pixel], p: Pixel) -> bool {
    match hull.len() {
        0 => false,
        1 => hull[0] == p,
        2 => {
            let (a, b) = (hull[0], hull[1]);
            cross(a, b, p) == 0
                && p.x >= a.x.min(b.x)
                && p.x <= a.x.max(b.x)
                && p.y >= a.y.min(b.y)
                && p.y <= a.y.max(b.y)
        }
        n => (0..n).all(|i| cross(hull[i], hull[(i + 1) % n], p) >= 0),
    }
}

/// Filled rasterisation of the clump's convex hull: every pixel whose centre lies
/// inside or on the hull polygon. Rows are filled span by span between the first
/// and last inside pixel, which is exact for a convex polygon.
pub fn convex_hull_mask(clump: &Clump, width: usize, height: usize) -> BinaryMask {
    let mut out = BinaryMask::new(width, height).expect("mask dimensions are positive");
    for p in hull_pixels(&clump.pixels) {
        out.set(p, true);
    }
    out
}

/// Pixels covered by the hull of `pixels`, in raster order.
pub(crate) fn hull_pixels(pixels: &[Pixel]) -> Vec<Pixel> {
    let hull = convex_hull(pixels);
    let (lo, hi) = bounds(pixels);
    let mut out = Vec::new();
    for y in lo.y..=hi.y {
        let first = (lo.x..=hi.x).find(|&x| inside_hull(&hull, Pixel::new(x, y)));
        let Some(first) = first else { continue };
        let last = (first..=hi.x)
            .rev()
            .find(|&x| inside_hull(&hull, Pixel::new(x, y)))
            .expect("first is inside");
        out.extend((first..=last).map(|x| Pixel::new(x, y)));
    }
    out
}

/// One connected region of (hull minus clump).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcavePart {
    /// Raster order.
    pub pixels: Vec<Pixel>,
}

impl ConcavePart {
    pub fn area(&self) -> usize {
        self.pixels.len()
    }

    pub fn contains(&self, p: Pixel) -> bool {
        self.pixels
            .binary_search_by_key(&(p.y, p.x), |q| (q.y, q.x))
            .is_ok()
    }

    /// True when `p` is in the part or 8-adjacent to it.
    pub fn touches(&self, p: Pixel) -> bool {
        (-1..=1).any(|dy| (-1..=1).any(|dx| self.contains(Pixel::new(p.x + dx, p.y + dy))))
    }
}

/// Concave parts surviving the area filter, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConcaveSet {
    pub parts: Vec<ConcavePart>,
}

impl ConcaveSet {
    /// Number of parts, `Q`.
    pub fn count(&self) -> usize {
        self.parts.len()
    }
}

/// 4-connected components of `hull` minus the clump with at least `min_area`
/// pixels, sorted by area descending. Equal areas keep raster discovery order.
pub fn concave_parts(clump: &Clump, hull: &BinaryMask, min_area: usize) -> ConcaveSet {
    let mut diff = hull.clone();
    for &p in &clump.pixels {
        diff.set(p, false);
    }
    concave_set_from(&diff, min_area)
}

fn concave_set_from(diff: &BinaryMask, min_area: usize) -> ConcaveSet {
    let mut parts: Vec<ConcavePart> = connected_regions(diff, Connectivity::Four)
        .into_iter()
        .filter(|r| r.len() >= min_area)
        .map(|pixels| ConcavePart { pixels })
        .collect();
    parts.sort_by_key(|p| std::cmp::Reverse(p.area()));
    ConcaveSet { parts }
}

/// Concave parts computed in a local frame around the clump, in the clump's
/// original coordinates. Same result as [`convex_hull_mask`] followed by
/// [`concave_parts`] without allocating a full-image mask.
pub(crate) fn local_concave_parts(pixels: &[Pixel], min_area: usize) -> ConcaveSet {
    let (lo, hi) = bounds(pixels);
    let w = (hi.x - lo.x + 1) as usize;
    let h = (hi.y - lo.y + 1) as usize;
    let shift = |p: Pixel| Pixel::new(p.x - lo.x, p.y - lo.y);
    let mut diff = BinaryMask::new(w, h).expect("nonempty bounds");
    for p in hull_pixels(pixels) {
        diff.set(shift(p), true);
    }
    for &p in pixels {
        diff.set(shift(p), false);
    }
    let mut set = concave_set_from(&diff, min_area);
    for part in &mut set.parts {
        for p in &mut part.pixels {
            *p = Pixel::new(p.x + lo.x, p.y + lo.y);
        }
    }
    set
}
