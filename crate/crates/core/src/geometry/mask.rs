use serde::{Deserialize, Serialize};

use super::GeometryError;

/// Integer pixel coordinate. `x` grows to the right, `y` grows downwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pixel {
    pub x: i32,
    pub y: i32,
}

impl Pixel {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    /// Squared Euclidean distance, exact in integer arithmetic.
    pub fn dist2(self, other: Pixel) -> i64 {
        let dx = i64::from(self.x) - i64::from(other.x);
        let dy = i64::from(self.y) - i64::from(other.y);
        dx * dx + dy * dy
    }

    pub fn distance(self, other: Pixel) -> f64 {
        (self.dist2(other) as f64).sqrt()
    }

    /// True when the two pixels are distinct and touch by edge or corner.
    pub fn is_8_adjacent(self, other: Pixel) -> bool {
        self != other && (self.x - other.x).abs() <= 1 && (self.y - other.y).abs() <= 1
    }

    pub fn to_point(self) -> Point {
        Point::new(f64::from(self.x), f64::from(self.y))
    }
}

/// Real-valued point in pixel units.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Row-major boolean grid, `true` = foreground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    /// All-background mask.
    pub fn new(width: usize, height: usize) -> Result<Self, GeometryError> {
        if width == 0 || height == 0 {
            return Err(GeometryError::EmptyDimensions { width, height });
        }
        Ok(Self {
            width,
            height,
            data: vec![false; width * height],
        })
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<bool>) -> Result<Self, GeometryError> {
        if width == 0 || height == 0 {
            return Err(GeometryError::EmptyDimensions { width, height });
        }
        if data.len() != width * height {
            return Err(GeometryError::DataLength {
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Mask of the given size with exactly `pixels` set. Out-of-bounds pixels are an error.
    pub fn from_pixels(
        width: usize,
        height: usize,
        pixels: impl IntoIterator<Item = Pixel>,
    ) -> Result<Self, GeometryError> {
        let mut mask = Self::new(width, height)?;
        for p in pixels {
            if !mask.contains(p) {
                return Err(GeometryError::OutOfBounds {
                    x: p.x,
                    y: p.y,
                    width,
                    height,
                });
            }
            mask.set(p, true);
        }
        Ok(mask)
    }

    /// Builds a mask from an ASCII picture: `#` is foreground, anything else background.
    /// Handy for small fixtures.
    pub fn from_ascii(rows: &[&str]) -> Result<Self, GeometryError> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut data = Vec::with_capacity(width * height);
        for row in rows {
            let chars: Vec<char> = row.chars().collect();
            if chars.len() != width {
                return Err(GeometryError::DataLength {
                    expected: width * height,
                    actual: data.len() + chars.len(),
                });
            }
            data.extend(chars.into_iter().map(|c| c == '#'));
        }
        Self::from_vec(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn contains(&self, p: Pixel) -> bool {
        p.x >= 0 && p.y >= 0 && (p.x as usize) < self.width && (p.y as usize) < self.height
    }

    /// Out-of-bounds reads return background.
    pub fn get(&self, p: Pixel) -> bool {
        self.contains(p) && self.data[p.y as usize * self.width + p.x as usize]
    }

    /// Panics when `p` is outside the mask.
    pub fn set(&mut self, p: Pixel, value: bool) {
        assert!(self.contains(p), "pixel {p:?} outside {}x{}", self.width, self.height);
        self.data[p.y as usize * self.width + p.x as usize] = value;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    /// Foreground pixels in raster order.
    pub fn foreground(&self) -> impl Iterator<Item = Pixel> + '_ {
        self.data.iter().enumerate().filter_map(move |(i, &v)| {
            v.then(|| Pixel::new((i % self.width) as i32, (i / self.width) as i32))
        })
    }
}
