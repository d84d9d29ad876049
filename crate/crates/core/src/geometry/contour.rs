use serde::{Deserialize, Serialize};

use super::{components::bounds, BinaryMask, Clump, Pixel};

/// Closed exterior boundary of a clump.
///
/// Points run counterclockwise as the image is displayed (x right, y down) and the
/// last point connects back to the first. Thin parts of a clump are walked out and
/// back, so a pixel may appear more than once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contour {
    pub points: Vec<Pixel>,
}

impl Contour {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Twice the signed shoelace area in image coordinates. Negative for the
    /// counterclockwise-as-displayed orientation produced by [`trace_contour`].
    pub fn signed_area2(&self) -> i64 {
        let n = self.points.len();
        (0..n)
            .map(|i| {
                let a = self.points[i];
                let b = self.points[(i + 1) % n];
                i64::from(a.x) * i64::from(b.y) - i64::from(b.x) * i64::from(a.y)
            })
            .sum()
    }
}

// Moore neighbourhood, clockwise as displayed, starting at west.
const RING: [(i32, i32); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

fn ring_index(dx: i32, dy: i32) -> usize {
    RING.iter()
        .position(|&d| d == (dx, dy))
        .expect("offset is a Moore neighbour")
}

/// Moore-neighbour tracing of the clump's outer boundary with Jacob's stopping
/// criterion. Only the clump's own pixels count as foreground, so other
/// components in `mask` and interior holes are ignored.
pub fn trace_contour(clump: &Clump, mask: &BinaryMask) -> Contour {
    debug_assert!(clump.pixels.iter().all(|&p| mask.get(p)));
    trace_pixels(&clump.pixels)
}

pub(crate) fn trace_pixels(pixels: &[Pixel]) -> Contour {
    assert!(!pixels.is_empty(), "cannot trace an empty clump");
    let (lo, hi) = bounds(pixels);
    // Local grid with a one-pixel background frame.
    let w = (hi.x - lo.x + 3) as usize;
    let h = (hi.y - lo.y + 3) as usize;
    let mut grid = vec![false; w * h];
    let to_local = |p: Pixel| ((p.y - lo.y + 1) as usize) * w + (p.x - lo.x + 1) as usize;
    for &p in pixels {
        grid[to_local(p)] = true;
    }
    let is_fg = |p: Pixel| grid[to_local(p)];

    let start = *pixels
        .iter()
        .min_by_key(|p| (p.y, p.x))
        .expect("nonempty");

    let mut points = vec![start];
    let mut current = start;
    // The west neighbour of the raster-first pixel is background.
    let mut back = 0usize;
    // Each pixel is entered at most once per side.
    let max_steps = 4 * pixels.len() + 8;

    for _ in 0..max_steps {
        let mut next = None;
        for step in 1..=8 {
            let k = (back + step) % 8;
            let (dx, dy) = RING[k];
            let candidate = Pixel::new(current.x + dx, current.y + dy);
            if is_fg(candidate) {
                let (bx, by) = RING[(k + 7) % 8];
                let back_abs = Pixel::new(current.x + bx, current.y + by);
                next = Some((
                    candidate,
                    ring_index(back_abs.x - candidate.x, back_abs.y - candidate.y),
                ));
                break;
            }
        }
        let Some((candidate, candidate_back)) = next else {
            // Isolated pixel.
            break;
        };
        // Jacob's criterion: the walk is closed once the first move repeats.
        if current == start && points.len() > 1 && candidate == points[1] {
            points.pop();
            break;
        }
        points.push(candidate);
        current = candidate;
        back = candidate_back;
    }

    // The walk above runs clockwise as displayed; flip it, keeping the start point.
    points[1..].reverse();
    Contour { points }
}
