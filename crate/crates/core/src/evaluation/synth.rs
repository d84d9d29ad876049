use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::geometry::{Pixel, Point};
use crate::raster::{GrayImage, LabelMap};

/// Rotated ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseSpec {
    pub center: Point,
    /// Semi-axis along the rotated x axis, then along the rotated y axis.
    pub semi_axes: (f64, f64),
    /// Radians.
    pub rotation: f64,
}

impl EllipseSpec {
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.semi_axes.0 * self.semi_axes.1
    }

    /// Distance from the centre to the boundary in direction `theta`.
    pub fn radius_towards(&self, theta: f64) -> f64 {
        let phi = theta - self.rotation;
        let (a, b) = self.semi_axes;
        a * b / ((b * phi.cos()).powi(2) + (a * phi.sin()).powi(2)).sqrt()
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (dx, dy) = (x - self.center.x, y - self.center.y);
        let (s, c) = self.rotation.sin_cos();
        let u = dx * c + dy * s;
        let v = -dx * s + dy * c;
        let (a, b) = self.semi_axes;
        (u / a).powi(2) + (v / b).powi(2) <= 1.0
    }

    /// Inclusive pixel bounding box.
    fn pixel_bounds(&self) -> (Pixel, Pixel) {
        let r = self.semi_axes.0.max(self.semi_axes.1).ceil() as i32 + 1;
        let (cx, cy) = (self.center.x.round() as i32, self.center.y.round() as i32);
        (Pixel::new(cx - r, cy - r), Pixel::new(cx + r, cy + r))
    }

    /// Pixels whose centres lie inside the ellipse.
    pub fn pixels(&self) -> Vec<Pixel> {
        let (lo, hi) = self.pixel_bounds();
        let mut out = Vec::new();
        for y in lo.y..=hi.y {
            for x in lo.x..=hi.x {
                if self.contains(f64::from(x), f64::from(y)) {
                    out.push(Pixel::new(x, y));
                }
            }
        }
        out
    }

    /// Ratio of centre distance to the larger of the two radii measured along
    /// the line joining the centres.
    pub fn overlap_ratio(&self, other: &EllipseSpec) -> f64 {
        let (dx, dy) = (other.center.x - self.center.x, other.center.y - self.center.y);
        let theta = dy.atan2(dx);
        let r = self.radius_towards(theta).max(other.radius_towards(theta));
        dx.hypot(dy) / r
    }
}

/// Parameters for [`generate_scene`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SceneParams {
    pub width: usize,
    pub height: usize,
    /// Inclusive range for the number of ellipses.
    pub count: (usize, usize),
    /// Inclusive range for each semi-axis, pixels.
    pub semi_axis: (f64, f64),
    /// Allowed range of centre distance over `max(r1, r2)` for overlapping pairs,
    /// radii taken along the line joining the centres.
    pub overlap_ratio: (f64, f64),
    pub min_area: f64,
    pub foreground: u8,
    pub background: u8,
    pub noise_sigma: f64,
    pub seed: u64,
    pub max_attempts: usize,
}

impl Default for SceneParams {
    fn default() -> Self {
        Self {
            width: 512,
            height: 512,
            count: (2, 4),
            semi_axis: (15.0, 40.0),
            overlap_ratio: (0.8, 1.2),
            min_area: 300.0,
            foreground: 200,
            background: 30,
            noise_sigma: 0.0,
            seed: 0,
            max_attempts: 1000,
        }
    }
}

impl SceneParams {
    fn validate(&self) -> Result<(), EvalError> {
        let ok = self.width > 0
            && self.height > 0
            && self.count.0 >= 1
            && self.count.0 <= self.count.1
            && self.semi_axis.0 > 0.0
            && self.semi_axis.0 <= self.semi_axis.1
            && self.overlap_ratio.0 > 0.0
            && self.overlap_ratio.0 <= self.overlap_ratio.1
            && self.noise_sigma >= 0.0
            && self.max_attempts >= 1;
        if ok {
            Ok(())
        } else {
            Err(EvalError::InvalidSceneParams)
        }
    }
}

/// Synthetic overlapping-ellipse scene with its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticScene {
    pub params: SceneParams,
    pub ellipses: Vec<EllipseSpec>,
    /// Label `i + 1` is ellipse `i`; pixels covered by several ellipses go to
    /// the nearest centre.
    pub truth: LabelMap,
    pub image: GrayImage,
}

/// Builds a cluster of overlapping ellipses. Every ellipse after the first is
/// attached to a random earlier one at a centre distance drawn from the overlap
/// range; placements that leave any pair either outside that range or touching
/// without overlapping are rejected. Fully determined by `params.seed`.
pub fn generate_scene(params: &SceneParams) -> Result<SyntheticScene, EvalError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let count = rng.random_range(params.count.0..=params.count.1);

    for _ in 0..params.max_attempts {
        let Some(mut ellipses) = try_cluster(&mut rng, params, count) else {
            continue;
        };
        let Some(shift) = fit_into_frame(&mut rng, &ellipses, params.width, params.height) else {
            continue;
        };
        for e in &mut ellipses {
            e.center.x += shift.x;
            e.center.y += shift.y;
        }
        let truth = rasterize_truth(&ellipses, params.width, params.height);
        let image = render(&mut rng, &truth, params);
        return Ok(SyntheticScene {
            params: *params,
            ellipses,
            truth,
            image,
        });
    }
    Err(EvalError::InfeasiblePacking {
        attempts: params.max_attempts,
    })
}

fn random_ellipse(rng: &mut ChaCha8Rng, params: &SceneParams) -> EllipseSpec {
    let (lo, hi) = params.semi_axis;
    loop {
        let e = EllipseSpec {
            center: Point::default(),
            semi_axes: (rng.random_range(lo..=hi), rng.random_range(lo..=hi)),
            rotation: rng.random_range(0.0..std::f64::consts::PI),
        };
        if e.area() >= params.min_area || lo * lo * std::f64::consts::PI < params.min_area {
            return e;
        }
    }
}

fn try_cluster(rng: &mut ChaCha8Rng, params: &SceneParams, count: usize) -> Option<Vec<EllipseSpec>> {
    let mut placed = vec![random_ellipse(rng, params)];
    let mut pixel_sets = vec![placed[0].pixels()];
    if (placed[0].area()) < params.min_area {
        return None;
    }
    while placed.len() < count {
        let parent = rng.random_range(0..placed.len());
        let mut e = random_ellipse(rng, params);
        if e.area() < params.min_area {
            return None;
        }
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let ratio = rng.random_range(params.overlap_ratio.0..=params.overlap_ratio.1);
        let r = placed[parent]
            .radius_towards(theta)
            .max(e.radius_towards(theta));
        e.center = Point::new(
            placed[parent].center.x + ratio * r * theta.cos(),
            placed[parent].center.y + ratio * r * theta.sin(),
        );
        let pixels = e.pixels();
        for (other, other_pixels) in placed.iter().zip(&pixel_sets) {
            let ratio = e.overlap_ratio(other);
            let in_range = ratio >= params.overlap_ratio.0 && ratio <= params.overlap_ratio.1;
            if !in_range && near(&pixels, other_pixels) {
                return None;
            }
        }
        placed.push(e);
        pixel_sets.push(pixels);
    }
    Some(placed)
}

/// True when some pixel of `a` is within one pixel (8-neighbourhood) of `b`.
fn near(a: &[Pixel], b: &[Pixel]) -> bool {
    let set: std::collections::HashSet<Pixel> = b.iter().copied().collect();
    a.iter().any(|p| {
        (-1..=1).any(|dy| (-1..=1).any(|dx| set.contains(&Pixel::new(p.x + dx, p.y + dy))))
    })
}

/// Random translation placing every ellipse pixel at least 2 px inside the frame.
fn fit_into_frame(
    rng: &mut ChaCha8Rng,
    ellipses: &[EllipseSpec],
    width: usize,
    height: usize,
) -> Option<Point> {
    let margin = 2.0;
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for e in ellipses {
        let r = e.semi_axes.0.max(e.semi_axes.1) + 1.0;
        min_x = min_x.min(e.center.x - r);
        max_x = max_x.max(e.center.x + r);
        min_y = min_y.min(e.center.y - r);
        max_y = max_y.max(e.center.y + r);
    }
    let room_x = width as f64 - 1.0 - 2.0 * margin - (max_x - min_x);
    let room_y = height as f64 - 1.0 - 2.0 * margin - (max_y - min_y);
    if room_x < 0.0 || room_y < 0.0 {
        return None;
    }
    let dx = margin - min_x + rng.random_range(0.0..=room_x);
    let dy = margin - min_y + rng.random_range(0.0..=room_y);
    // Whole-pixel shifts keep the shapes identical to the untranslated cluster.
    Some(Point::new(dx.round(), dy.round()))
}

fn rasterize_truth(ellipses: &[EllipseSpec], width: usize, height: usize) -> LabelMap {
    let mut truth = LabelMap::new(width, height).expect("positive dimensions");
    let mut best = vec![f64::INFINITY; width * height];
    for (i, e) in ellipses.iter().enumerate() {
        let label = u16::try_from(i + 1).expect("fewer than 65536 ellipses");
        for p in e.pixels() {
            if p.x < 0 || p.y < 0 || p.x as usize >= width || p.y as usize >= height {
                continue;
            }
            let d = p.to_point().distance(e.center);
            let idx = p.y as usize * width + p.x as usize;
            // Strict comparison: equidistant pixels stay with the earlier ellipse.
            if d < best[idx] {
                best[idx] = d;
                truth.set(p, label);
            }
        }
    }
    truth
}

fn render(rng: &mut ChaCha8Rng, truth: &LabelMap, params: &SceneParams) -> GrayImage {
    let noise = (params.noise_sigma > 0.0)
        .then(|| Normal::new(0.0, params.noise_sigma).expect("finite sigma"));
    let data = truth
        .data()
        .iter()
        .map(|&l| {
            let base = if l != 0 {
                params.foreground
            } else {
                params.background
            };
            match &noise {
                Some(n) => (f64::from(base) + n.sample(rng)).round().clamp(0.0, 255.0) as u8,
                None => base,
            }
        })
        .collect();
    GrayImage::from_vec(params.width, params.height, data).expect("positive dimensions")
}
