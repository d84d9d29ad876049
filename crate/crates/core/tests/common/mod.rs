#![allow(dead_code)]

use clumpsplit::evaluation::EllipseSpec;
use clumpsplit::geometry::{label_components, BinaryMask, Clump, Pixel, Point};

/// Pixels whose centres lie within `r` of `(cx, cy)`.
pub fn disc(cx: f64, cy: f64, r: f64) -> Vec<Pixel> {
    let ri = r.ceil() as i32 + 1;
    let (x0, y0) = (cx.round() as i32, cy.round() as i32);
    let mut out = Vec::new();
    for y in y0 - ri..=y0 + ri {
        for x in x0 - ri..=x0 + ri {
            let (dx, dy) = (f64::from(x) - cx, f64::from(y) - cy);
            if dx * dx + dy * dy <= r * r {
                out.push(Pixel::new(x, y));
            }
        }
    }
    out
}

pub fn mask_of(width: usize, height: usize, pixels: impl IntoIterator<Item = Pixel>) -> BinaryMask {
    BinaryMask::from_pixels(width, height, pixels).unwrap()
}

pub fn single_clump(mask: &BinaryMask) -> Clump {
    let mut clumps = label_components(mask);
    assert_eq!(clumps.len(), 1, "expected one clump");
    clumps.remove(0)
}

pub fn ellipse(cx: f64, cy: f64, a: f64, b: f64, rotation: f64) -> EllipseSpec {
    EllipseSpec {
        center: Point::new(cx, cy),
        semi_axes: (a, b),
        rotation,
    }
}

/// Four ellipses in a zigzag chain, each linked to the next at 1.1 times the
/// larger radius along the line of centres.
pub fn four_cell_scene() -> (BinaryMask, Vec<EllipseSpec>) {
    let mut ellipses = vec![ellipse(60.0, 70.0, 30.0, 24.0, 0.3)];
    let steps = [(0.35f64, 26.0, 22.0, 1.2), (-0.35, 28.0, 23.0, 0.1), (0.35, 25.0, 21.0, 2.0)];
    for (theta, a, b, rot) in steps {
        let prev = *ellipses.last().unwrap();
        let mut e = ellipse(0.0, 0.0, a, b, rot);
        let r = prev.radius_towards(theta).max(e.radius_towards(theta));
        e.center.x = prev.center.x + 1.1 * r * theta.cos();
        e.center.y = prev.center.y + 1.1 * r * theta.sin();
        ellipses.push(e);
    }
    let mask = mask_of(300, 160, ellipses.iter().flat_map(EllipseSpec::pixels));
    (mask, ellipses)
}

/// Two discs of radius `r` whose centres are `d` apart on a horizontal line.
pub fn dumbbell(r: f64, d: f64) -> (BinaryMask, Point, Point) {
    let margin = r + 10.0;
    let a = Point::new(margin, margin);
    let b = Point::new(margin + d, margin);
    let width = (2.0 * margin + d).ceil() as usize;
    let height = (2.0 * margin).ceil() as usize;
    let mask = mask_of(width, height, disc(a.x, a.y, r).into_iter().chain(disc(b.x, b.y, r)));
    (mask, a, b)
}

/// Least-squares slope over consecutive integer abscissae via an explicit 2x2
/// solve of the normal equations.
pub fn brute_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sy: f64 = ys.iter().sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    // [sxx sx; sx n] [a; b] = [sxy; sy]
    let det = sxx * n - sx * sx;
    (n * sxy - sx * sy) / det
}

/// Left and right slopes at `j` computed without cyclic index arithmetic: the
/// signal is tiled three times and the windows are read from the middle copy.
pub fn brute_slopes(signal: &[f64], j: usize, n: usize) -> (f64, f64) {
    let len = signal.len();
    let tiled: Vec<f64> = signal.iter().chain(signal).chain(signal).copied().collect();
    let c = len + j;
    let xs: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let left: Vec<f64> = tiled[c + 1 - n..=c].to_vec();
    let right: Vec<f64> = tiled[c..c + n].to_vec();
    (brute_slope(&xs, &left), brute_slope(&xs, &right))
}

/// Ideal low-pass by a direct O(L^2) DFT.
pub fn brute_lowpass(signal: &[f64], w: usize) -> Vec<f64> {
    let l = signal.len();
    let tau = std::f64::consts::TAU;
    let spectrum: Vec<(f64, f64)> = (0..l)
        .map(|k| {
            if k > w && k < l - w {
                return (0.0, 0.0);
            }
            signal.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, &v)| {
                let ang = -tau * (k * j) as f64 / l as f64;
                (re + v * ang.cos(), im + v * ang.sin())
            })
        })
        .collect();
    (0..l)
        .map(|j| {
            spectrum.iter().enumerate().fold(0.0, |acc, (k, &(re, im))| {
                let ang = tau * (k * j) as f64 / l as f64;
                acc + re * ang.cos() - im * ang.sin()
            }) / l as f64
        })
        .collect()
}

/// Exhaustive cyclic extremum scan: for every index, walk out over equal
/// neighbours in both directions and compare with the first differing values.
/// Returns `(index, is_max)` for run centres that clear `floor * max|s|`.
pub fn brute_extrema(values: &[f64], floor: f64) -> Vec<(usize, bool)> {
    let l = values.len();
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::new();
    for i in 0..l {
        let v = values[i];
        let mut back = 0;
        while back < l && values[(i + l - back - 1) % l] == v {
            back += 1;
        }
        if back >= l {
            return Vec::new();
        }
        let mut fwd = 0;
        while values[(i + fwd + 1) % l] == v {
            fwd += 1;
        }
        let run_len = back + fwd + 1;
        if back != (run_len - 1) / 2 {
            continue;
        }
        let prev = values[(i + l - back - 1) % l];
        let next = values[(i + fwd + 1) % l];
        let is_max = v > prev && v > next;
        let is_min = v < prev && v < next;
        if (is_max || is_min) && v.abs() >= floor * peak {
            out.push((i, is_max));
        }
    }
    out
}
