//! Inspection overlay: cut lines in red, chosen bottleneck points circled.

use clumpsplit::geometry::{bresenham, Pixel};
use clumpsplit::SegmentationResult;
use image::{Rgb, RgbImage};

const CUT: Rgb<u8> = Rgb([255, 0, 0]);
const POINT: Rgb<u8> = Rgb([0, 255, 0]);
const POINT_RADIUS: i32 = 5;

fn put(img: &mut RgbImage, p: Pixel, colour: Rgb<u8>) {
    if p.x >= 0 && p.y >= 0 && (p.x as u32) < img.width() && (p.y as u32) < img.height() {
        img.put_pixel(p.x as u32, p.y as u32, colour);
    }
}

/// Midpoint circle outline.
fn circle(img: &mut RgbImage, c: Pixel, r: i32, colour: Rgb<u8>) {
    let (mut x, mut y, mut err) = (r, 0, 1 - r);
    while x >= y {
        for (dx, dy) in [(x, y), (y, x), (-y, x), (-x, y), (-x, -y), (-y, -x), (y, -x), (x, -y)] {
            put(img, Pixel::new(c.x + dx, c.y + dy), colour);
        }
        y += 1;
        if err < 0 {
            err += 2 * y + 1;
        } else {
            x -= 1;
            err += 2 * (y - x) + 1;
        }
    }
}

pub fn draw(base: &mut RgbImage, result: &SegmentationResult) {
    let pairs: Vec<(Pixel, Pixel)> = result
        .traces
        .iter()
        .flat_map(|t| t.steps.iter())
        .filter(|s| s.cut_applied)
        .filter_map(|s| s.chosen_pair)
        .collect();
    for &(a, b) in &pairs {
        for p in bresenham(a, b) {
            put(base, p, CUT);
        }
    }
    for &(a, b) in &pairs {
        circle(base, a, POINT_RADIUS, POINT);
        circle(base, b, POINT_RADIUS, POINT);
    }
}
