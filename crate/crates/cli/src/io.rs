//! Image and label-map files.

use std::fs;
use std::path::Path;

use clumpsplit::{BinaryMask, GrayImage, LabelMap};
use image::{DynamicImage, ImageBuffer, Luma, Rgb, RgbImage};

use crate::error::CliError;

fn open(path: &Path) -> Result<DynamicImage, CliError> {
    let reader = image::ImageReader::open(path)
        .map_err(CliError::io(path))?
        .with_guessed_format()
        .map_err(CliError::io(path))?;
    reader.decode().map_err(CliError::image(path))
}

/// Any readable image, reduced to 8-bit luminance.
pub fn read_gray(path: &Path) -> Result<GrayImage, CliError> {
    let img = open(path)?.to_luma8();
    let (w, h) = img.dimensions();
    GrayImage::from_vec(w as usize, h as usize, img.into_raw()).map_err(|e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Foreground mask from an image that holds at most two values, zero being
/// background. Returns `None` when the image has more levels than that.
pub fn binary_mask(image: &GrayImage) -> Option<BinaryMask> {
    let mut on = None;
    for &v in image.data() {
        if v == 0 {
            continue;
        }
        match on {
            None => on = Some(v),
            Some(u) if u != v => return None,
            Some(_) => {}
        }
    }
    let data = image.data().iter().map(|&v| v != 0).collect();
    Some(BinaryMask::from_vec(image.width(), image.height(), data).expect("image dimensions"))
}

pub fn write_gray(path: &Path, image: &GrayImage) -> Result<(), CliError> {
    let buf: ImageBuffer<Luma<u8>, Vec<u8>> =
        ImageBuffer::from_raw(image.width() as u32, image.height() as u32, image.data().to_vec())
            .expect("buffer matches dimensions");
    buf.save(path).map_err(CliError::image(path))
}

pub fn write_rgb(path: &Path, image: &RgbImage) -> Result<(), CliError> {
    image.save(path).map_err(CliError::image(path))
}

pub fn gray_to_rgb(image: &GrayImage) -> RgbImage {
    RgbImage::from_fn(image.width() as u32, image.height() as u32, |x, y| {
        let v = image.get(x as usize, y as usize);
        Rgb([v, v, v])
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LabelFormat {
    /// 16-bit grayscale PNG.
    Png,
    /// One row of comma-separated labels per image row.
    Csv,
}

impl LabelFormat {
    pub fn extension(self) -> &'static str {
        match self {
            LabelFormat::Png => "png",
            LabelFormat::Csv => "csv",
        }
    }
}

pub fn write_labels(path: &Path, map: &LabelMap, format: LabelFormat) -> Result<(), CliError> {
    match format {
        LabelFormat::Png => {
            let buf: ImageBuffer<Luma<u16>, Vec<u16>> =
                ImageBuffer::from_raw(map.width() as u32, map.height() as u32, map.data().to_vec())
                    .expect("buffer matches dimensions");
            buf.save(path).map_err(CliError::image(path))
        }
        LabelFormat::Csv => {
            let mut out = String::with_capacity(map.data().len() * 2);
            for row in map.data().chunks(map.width()) {
                let line: Vec<String> = row.iter().map(u16::to_string).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            fs::write(path, out).map_err(CliError::io(path))
        }
    }
}

/// Reads a label map written by [`write_labels`]; `.csv` files are parsed as
/// text, anything else as a single-channel image taken at face value.
pub fn read_labels(path: &Path) -> Result<LabelMap, CliError> {
    let bad = |message: String| CliError::Format {
        path: path.to_path_buf(),
        message,
    };
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        let mut data = Vec::new();
        let mut width = None;
        for (i, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
            let row = line
                .split(',')
                .map(|v| v.trim().parse::<u16>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| bad(format!("row {}: {e}", i + 1)))?;
            if *width.get_or_insert(row.len()) != row.len() {
                return Err(bad(format!("row {} has {} values", i + 1, row.len())));
            }
            data.extend(row);
        }
        let width = width.ok_or_else(|| bad("no rows".into()))?;
        let height = data.len() / width;
        return LabelMap::from_vec(width, height, data).map_err(|e| bad(e.to_string()));
    }
    let (w, h, data) = match open(path)? {
        DynamicImage::ImageLuma8(img) => {
            let (w, h) = img.dimensions();
            (w, h, img.into_raw().into_iter().map(u16::from).collect())
        }
        DynamicImage::ImageLuma16(img) => {
            let (w, h) = img.dimensions();
            (w, h, img.into_raw())
        }
        _ => return Err(bad("label maps must be single-channel images".into())),
    };
    LabelMap::from_vec(w as usize, h as usize, data).map_err(|e| bad(e.to_string()))
}
