//! Slope difference distribution kernel.
//!
//! Works on cyclic 1D signals: the radial signature of a closed contour, or a
//! 256-bin intensity histogram. Indices wrap everywhere, so results do not depend
//! on where a contour trace happened to start.

use rustfft::{num_complex::Complex64, FftPlanner};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Contour, Pixel, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SddError {
    #[error("half window must be at least 2, got {0}")]
    HalfWindowTooSmall(usize),
    #[error("signal of length {len} is too short for half window {half_window} (needs {} samples)", 2 * half_window + 1)]
    SignalTooShort { len: usize, half_window: usize },
    #[error("extremum index {index} out of range for contour of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Distance from each contour point to `centroid`, in contour order.
pub fn radial_signature(contour: &Contour, centroid: Point) -> Vec<f64> {
    contour
        .points
        .iter()
        .map(|p| p.to_point().distance(centroid))
        .collect()
}

/// Ideal low-pass filter in the DFT domain. Keeps frequency bins `0..=W` and
/// `L-W..L`, zeroes the rest and transforms back. `W >= L/2` is the identity,
/// `W = 0` leaves only the mean.
pub fn lowpass_dft(signal: &[f64], bandwidth: usize) -> Vec<f64> {
    lowpass_with_residue(signal, bandwidth).0
}

/// Filtered signal plus the largest imaginary magnitude dropped when taking the
/// real part.
pub(crate) fn lowpass_with_residue(signal: &[f64], bandwidth: usize) -> (Vec<f64>, f64) {
    let len = signal.len();
    if len == 0 || bandwidth >= len / 2 {
        return (signal.to_vec(), 0.0);
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex64> = signal.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(len).process(&mut buf);
    for bin in &mut buf[bandwidth + 1..len - bandwidth] {
        *bin = Complex64::new(0.0, 0.0);
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let scale = 1.0 / len as f64;
    let residue = buf.iter().map(|c| (c.im * scale).abs()).fold(0.0, f64::max);
    (buf.iter().map(|c| c.re * scale).collect(), residue)
}

fn check_window(len: usize, half_window: usize) -> Result<(), SddError> {
    if half_window < 2 {
        return Err(SddError::HalfWindowTooSmall(half_window));
    }
    if len < 2 * half_window + 1 {
        return Err(SddError::SignalTooShort { len, half_window });
    }
    Ok(())
}

/// Least-squares slope of `y` against `0, 1, .., n-1`.
fn window_slope(y: impl Iterator<Item = f64>, n: usize) -> f64 {
    let mean_x = (n as f64 - 1.0) / 2.0;
    let sxx = (n * (n * n - 1)) as f64 / 12.0;
    let sxy: f64 = y.enumerate().map(|(i, v)| (i as f64 - mean_x) * v).sum();
    sxy / sxx
}

/// Slopes of the lines fitted to the `half_window` samples ending at `j` (left)
/// and starting at `j` (right), with cyclic wrap.
pub fn fit_slopes(signal: &[f64], j: usize, half_window: usize) -> Result<(f64, f64), SddError> {
    let len = signal.len();
    check_window(len, half_window)?;
    let n = half_window;
    let at = |k: usize| signal[k % len];
    let j = j % len;
    let left = window_slope((0..n).map(|i| at(j + len + 1 + i - n)), n);
    let right = window_slope((0..n).map(|i| at(j + i)), n);
    Ok((left, right))
}

/// Slope difference `right - left` at every index.
pub fn sdd(signal: &[f64], half_window: usize) -> Result<Vec<f64>, SddError> {
    check_window(signal.len(), half_window)?;
    (0..signal.len())
        .map(|j| fit_slopes(signal, j, half_window).map(|(l, r)| r - l))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub index: usize,
    pub polarity: Polarity,
    pub magnitude: f64,
}

/// Strict cyclic local maxima and minima with `|s| >= prominence_floor * max|s|`.
///
/// Runs of equal values are treated as one sample located at the run's centre
/// (the lower of two centres for even runs, counted from the run start). A
/// constant signal has no extrema.
pub fn detect_extrema(values: &[f64], prominence_floor: f64) -> Vec<Extremum> {
    let len = values.len();
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if len < 2 || peak == 0.0 {
        return Vec::new();
    }
    // Start at a run boundary so that no run wraps past the scan start.
    let Some(offset) = (0..len).find(|&i| values[i] != values[(i + len - 1) % len]) else {
        return Vec::new();
    };
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < len {
        let start = i;
        let v = values[(offset + start) % len];
        while i < len && values[(offset + i) % len] == v {
            i += 1;
        }
        runs.push((offset + start, i - start));
    }

    let floor = prominence_floor * peak;
    let nruns = runs.len();
    let mut out = Vec::new();
    for r in 0..nruns {
        let (start, run_len) = runs[r];
        let v = values[start % len];
        let prev = values[runs[(r + nruns - 1) % nruns].0 % len];
        let next = values[runs[(r + 1) % nruns].0 % len];
        let polarity = if v > prev && v > next {
            Polarity::Max
        } else if v < prev && v < next {
            Polarity::Min
        } else {
            continue;
        };
        if v.abs() < floor {
            continue;
        }
        out.push(Extremum {
            index: (start + (run_len - 1) / 2) % len,
            polarity,
            magnitude: v.abs(),
        });
    }
    out.sort_by_key(|e| e.index);
    out
}

/// Contour points at the given indices.
pub fn back_project(indices: &[usize], contour: &Contour) -> Result<Vec<Pixel>, SddError> {
    indices
        .iter()
        .map(|&index| {
            contour
                .points
                .get(index)
                .copied()
                .ok_or(SddError::IndexOutOfRange {
                    index,
                    len: contour.len(),
                })
        })
        .collect()
}

/// Radial signature of a contour, raw and low-pass filtered.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialBoundary {
    pub contour: Contour,
    pub raw: Vec<f64>,
    pub smoothed: Vec<f64>,
    pub bandwidth: usize,
}

impl RadialBoundary {
    pub fn new(contour: Contour, centroid: Point, bandwidth: usize) -> Self {
        let raw = radial_signature(&contour, centroid);
        let smoothed = lowpass_dft(&raw, bandwidth);
        Self {
            contour,
            raw,
            smoothed,
            bandwidth,
        }
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }
}

/// Slope difference values of a signal and their extrema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SddProfile {
    pub values: Vec<f64>,
    pub half_window: usize,
    pub extrema: Vec<Extremum>,
}

impl SddProfile {
    pub fn compute(
        signal: &[f64],
        half_window: usize,
        prominence_floor: f64,
    ) -> Result<Self, SddError> {
        let values = sdd(signal, half_window)?;
        let extrema = detect_extrema(&values, prominence_floor);
        Ok(Self {
            values,
            half_window,
            extrema,
        })
    }

    pub fn extremum_indices(&self) -> Vec<usize> {
        self.extrema.iter().map(|e| e.index).collect()
    }
}
