//! Grayscale front end: picks a global intensity threshold from the SDD of the
//! low-pass filtered histogram.
//!
//! The histogram is normalised to unit mass, treated as one period of a cyclic
//! signal and smoothed with the same DFT filter used on contours. Positive SDD
//! extrema mark places where the histogram turns from falling to rising. Between
//! the two tallest peaks of the smoothed histogram these are the edges of the
//! valley floor, and the threshold is the midpoint of the outermost two.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::BinaryMask;
use crate::raster::GrayImage;
use crate::sdd::{detect_extrema, lowpass_dft, sdd, Polarity};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThresholdError {
    #[error("unimodal histogram")]
    Unimodal,
    #[error("histogram bandwidth must be at least 1")]
    Bandwidth,
    #[error("half window must be between 2 and 127, got {0}")]
    HalfWindow(usize),
    #[error("prominence floor must lie in [0, 1], got {0}")]
    ProminenceFloor(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum ThresholdMethod {
    /// Histogram SDD valley selection.
    Sdd {
        bandwidth: usize,
        half_window: usize,
        prominence_floor: f64,
    },
    /// Fixed intensity threshold.
    Fixed { threshold: u8 },
}

impl Default for ThresholdMethod {
    fn default() -> Self {
        ThresholdMethod::Sdd {
            bandwidth: 8,
            half_window: 5,
            prominence_floor: 0.05,
        }
    }
}

/// Threshold method plus foreground polarity.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub method: ThresholdMethod,
    /// Dark objects on a bright background: the image is inverted first.
    pub invert: bool,
}

impl ThresholdConfig {
    pub fn validate(&self) -> Result<(), ThresholdError> {
        if let ThresholdMethod::Sdd {
            bandwidth,
            half_window,
            prominence_floor,
        } = self.method
        {
            if bandwidth == 0 {
                return Err(ThresholdError::Bandwidth);
            }
            if !(2..=127).contains(&half_window) {
                return Err(ThresholdError::HalfWindow(half_window));
            }
            if !(0.0..=1.0).contains(&prominence_floor) {
                return Err(ThresholdError::ProminenceFloor(prominence_floor));
            }
        }
        Ok(())
    }

    /// Threshold and apply. Returns the mask and the threshold used (in the
    /// inverted intensity scale when `invert` is set).
    pub fn segment(&self, image: &GrayImage) -> Result<(BinaryMask, u8), ThresholdError> {
        self.validate()?;
        let inverted;
        let image = if self.invert {
            inverted = image.inverted();
            &inverted
        } else {
            image
        };
        let t = match self.method {
            ThresholdMethod::Sdd {
                bandwidth,
                half_window,
                prominence_floor,
            } => sdd_threshold_with_floor(image, bandwidth, half_window, prominence_floor)?,
            ThresholdMethod::Fixed { threshold } => threshold,
        };
        Ok((apply_threshold(image, t), t))
    }
}

/// Histogram normalised to unit mass.
pub fn normalized_histogram(image: &GrayImage) -> Vec<f64> {
    let total = (image.width() * image.height()) as f64;
    image
        .histogram()
        .iter()
        .map(|&c| c as f64 / total)
        .collect()
}

/// SDD threshold with the default prominence floor of 0.05.
pub fn sdd_threshold(
    image: &GrayImage,
    bandwidth: usize,
    half_window: usize,
) -> Result<u8, ThresholdError> {
    sdd_threshold_with_floor(image, bandwidth, half_window, 0.05)
}

pub fn sdd_threshold_with_floor(
    image: &GrayImage,
    bandwidth: usize,
    half_window: usize,
    prominence_floor: f64,
) -> Result<u8, ThresholdError> {
    let hist = normalized_histogram(image);
    if hist.iter().filter(|&&v| v > 0.0).count() < 2 {
        return Err(ThresholdError::Unimodal);
    }
    let smoothed = lowpass_dft(&hist, bandwidth);
    select_valley(&smoothed, half_window, prominence_floor)
}

/// Local maxima of the smoothed histogram over the open range (no wrap),
/// plateaus reported at their lower end.
fn histogram_peaks(smoothed: &[f64]) -> Vec<usize> {
    let n = smoothed.len();
    let mut peaks = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && smoothed[j + 1] == smoothed[i] {
            j += 1;
        }
        let left_ok = i == 0 || smoothed[i - 1] < smoothed[i];
        let right_ok = j == n - 1 || smoothed[j + 1] < smoothed[i];
        if left_ok && right_ok && smoothed[i] > 0.0 {
            peaks.push(i);
        }
        i = j + 1;
    }
    peaks
}

fn select_valley(
    smoothed: &[f64],
    half_window: usize,
    prominence_floor: f64,
) -> Result<u8, ThresholdError> {
    let mut peaks = histogram_peaks(smoothed);
    if peaks.len() < 2 {
        return Err(ThresholdError::Unimodal);
    }
    // Tallest two, ties to the lower intensity.
    peaks.sort_by(|&a, &b| smoothed[b].total_cmp(&smoothed[a]).then(a.cmp(&b)));
    let (lo, hi) = (peaks[0].min(peaks[1]), peaks[0].max(peaks[1]));

    // The SDD maxima between the peaks mark where each mode bends into the
    // valley floor. Ringing from the ideal filter can put small bumps on the
    // floor itself, so the threshold is the middle of the outermost bends.
    let values = sdd(smoothed, half_window).map_err(|_| ThresholdError::HalfWindow(half_window))?;
    let bends: Vec<usize> = detect_extrema(&values, prominence_floor)
        .into_iter()
        .filter(|e| e.polarity == Polarity::Max && e.index > lo && e.index < hi)
        .map(|e| e.index)
        .collect();
    match (bends.first(), bends.last()) {
        (Some(&first), Some(&last)) => Ok(((first + last) / 2) as u8),
        _ => Err(ThresholdError::Unimodal),
    }
}

/// Foreground where intensity is strictly above `t`.
pub fn apply_threshold(image: &GrayImage, t: u8) -> BinaryMask {
    BinaryMask::from_vec(
        image.width(),
        image.height(),
        image.data().iter().map(|&v| v > t).collect(),
    )
    .expect("image dimensions are valid")
}
