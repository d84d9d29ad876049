//! Plain in-memory rasters: 8-bit gray images and 16-bit label maps.

use thiserror::Error;

use crate::geometry::{BinaryMask, Pixel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RasterError {
    #[error("raster dimensions must be positive, got {width}x{height}")]
    EmptyDimensions { width: usize, height: usize },
    #[error("raster data has {actual} values, expected {expected}")]
    DataLength { expected: usize, actual: usize },
}

fn check(width: usize, height: usize, len: usize) -> Result<(), RasterError> {
    if width == 0 || height == 0 {
        return Err(RasterError::EmptyDimensions { width, height });
    }
    if len != width * height {
        return Err(RasterError::DataLength {
            expected: width * height,
            actual: len,
        });
    }
    Ok(())
}

/// Row-major 8-bit intensity image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn from_vec(width: usize, height: usize, data: Vec<u8>) -> Result<Self, RasterError> {
        check(width, height, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, RasterError> {
        Self::from_vec(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    /// 256-bin intensity histogram.
    pub fn histogram(&self) -> [u64; 256] {
        let mut bins = [0u64; 256];
        for &v in &self.data {
            bins[v as usize] += 1;
        }
        bins
    }

    /// `255 - v` for every pixel.
    pub fn inverted(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| 255 - v).collect(),
        }
    }
}

/// Row-major 16-bit label image; 0 is background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    data: Vec<u16>,
}

impl LabelMap {
    pub fn new(width: usize, height: usize) -> Result<Self, RasterError> {
        Self::from_vec(width, height, vec![0; width * height])
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<u16>) -> Result<Self, RasterError> {
        check(width, height, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    /// Out-of-bounds reads return 0.
    pub fn get(&self, p: Pixel) -> u16 {
        if p.x < 0 || p.y < 0 || p.x as usize >= self.width || p.y as usize >= self.height {
            return 0;
        }
        self.data[p.y as usize * self.width + p.x as usize]
    }

    pub fn set(&mut self, p: Pixel, label: u16) {
        self.data[p.y as usize * self.width + p.x as usize] = label;
    }

    pub fn max_label(&self) -> u16 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    /// Foreground = any nonzero label.
    pub fn foreground(&self) -> BinaryMask {
        BinaryMask::from_vec(
            self.width,
            self.height,
            self.data.iter().map(|&l| l != 0).collect(),
        )
        .expect("label map dimensions are valid")
    }

    /// Pixels of every label `1..=max_label`, raster order inside each region.
    /// Index 0 of the result holds label 1.
    pub fn regions(&self) -> Vec<Vec<Pixel>> {
        let mut out = vec![Vec::new(); self.max_label() as usize];
        for (i, &l) in self.data.iter().enumerate() {
            if l != 0 {
                out[l as usize - 1].push(Pixel::new((i % self.width) as i32, (i / self.width) as i32));
            }
        }
        out
    }
}
