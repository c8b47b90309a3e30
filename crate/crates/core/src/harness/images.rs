use std::path::Path;
use std::str::FromStr;

use image::{imageops, DynamicImage, ImageBuffer, Luma};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HoloError, Result};
use crate::field::RealImage;

/// Procedural stand-ins for the standard photographic test corpus.
///
/// Each is defined relative to the image size, so its statistics do not change
/// with resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SyntheticKind {
    /// Diagonal linear ramp from 0 to 1.
    Gradient,
    /// 8 x 8 board of black and white squares.
    Checkerboard,
    /// Independent uniform pixels from a fixed seed.
    Noise,
    /// Concentric cosine rings.
    Rings,
}

impl SyntheticKind {
    pub const ALL: [SyntheticKind; 4] = [
        SyntheticKind::Gradient,
        SyntheticKind::Checkerboard,
        SyntheticKind::Noise,
        SyntheticKind::Rings,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SyntheticKind::Gradient => "gradient",
            SyntheticKind::Checkerboard => "checkerboard",
            SyntheticKind::Noise => "noise",
            SyntheticKind::Rings => "rings",
        }
    }
}

impl FromStr for SyntheticKind {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        SyntheticKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HoloError::InvalidParameter(format!("unknown synthetic image `{s}`")))
    }
}

const NOISE_SEED: u64 = 0x5EED_1A6E;

/// Generates a square synthetic image with values in `[0, 1]`.
pub fn synthetic_image(kind: SyntheticKind, n: usize) -> Result<RealImage> {
    let nf = n as f64;
    match kind {
        SyntheticKind::Gradient => {
            let denom = (2 * n.saturating_sub(1)).max(1) as f64;
            RealImage::from_fn(n, n, |x, y| (x + y) as f64 / denom)
        }
        SyntheticKind::Checkerboard => {
            let cell = (n / 8).max(1);
            RealImage::from_fn(n, n, |x, y| ((x / cell + y / cell) % 2) as f64)
        }
        SyntheticKind::Noise => {
            let mut rng = ChaCha8Rng::seed_from_u64(NOISE_SEED);
            RealImage::from_fn(n, n, |_, _| rng.random::<f64>())
        }
        SyntheticKind::Rings => RealImage::from_fn(n, n, |x, y| {
            let dx = (x as f64 + 0.5) / nf - 0.5;
            let dy = (y as f64 + 0.5) / nf - 0.5;
            0.5 + 0.5 * (std::f64::consts::TAU * 6.0 * (dx * dx + dy * dy).sqrt()).cos()
        }),
    }
}

/// Reads a raster file as grayscale amplitudes in `[0, 1]`.
///
/// Colour images are reduced to luminance; 8-bit values map as `v / 255`,
/// deeper images as `v / 65535`.
pub fn load_image(path: impl AsRef<Path>) -> Result<RealImage> {
    let path = path.as_ref();
    let img = image::open(path).map_err(|e| HoloError::Image {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    from_dynamic(&img).map_err(|e| match e {
        HoloError::UnsupportedGeometry(m) => HoloError::Image {
            path: path.display().to_string(),
            message: m,
        },
        other => other,
    })
}

fn from_dynamic(img: &DynamicImage) -> Result<RealImage> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let eight_bit = matches!(
        img,
        DynamicImage::ImageLuma8(_) | DynamicImage::ImageLumaA8(_) | DynamicImage::ImageRgb8(_) | DynamicImage::ImageRgba8(_)
    );
    let data = if eight_bit {
        img.to_luma8().into_raw().into_iter().map(|v| f64::from(v) / 255.0).collect()
    } else {
        img.to_luma16().into_raw().into_iter().map(|v| f64::from(v) / 65535.0).collect()
    };
    RealImage::new(w, h, data)
}

/// Resolves an image id to an `n x n` target.
///
/// `synthetic:<kind>` ids are generated directly; anything else is read as a
/// file, centre-cropped to a square and resampled to `n x n` when needed.
pub fn resolve_image(id: &str, n: usize) -> Result<RealImage> {
    if let Some(kind) = id.strip_prefix("synthetic:") {
        return synthetic_image(kind.parse()?, n);
    }
    let img = load_image(id)?;
    if img.dims() == (n, n) {
        return Ok(img);
    }
    let side = img.width().min(img.height());
    let (x0, y0) = ((img.width() - side) / 2, (img.height() - side) / 2);
    let buf: ImageBuffer<Luma<f32>, Vec<f32>> = ImageBuffer::from_fn(side as u32, side as u32, |x, y| {
        Luma([img.get(x0 + x as usize, y0 + y as usize) as f32])
    });
    let resized = imageops::resize(&buf, n as u32, n as u32, imageops::FilterType::Lanczos3);
    RealImage::new(n, n, resized.into_raw().into_iter().map(|v| f64::from(v).clamp(0.0, 1.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::{GrayImage, RgbImage};

    #[test]
    fn solid_images() {
        let dir = tempfile::tempdir().unwrap();
        let white = dir.path().join("white.png");
        GrayImage::from_pixel(4, 4, Luma([255])).save(&white).unwrap();
        assert!(load_image(&white).unwrap().as_slice().iter().all(|&v| v == 1.0));
        let black = dir.path().join("black.pgm");
        GrayImage::from_pixel(3, 5, Luma([0])).save(&black).unwrap();
        let img = load_image(&black).unwrap();
        assert_eq!(img.dims(), (3, 5));
        assert!(img.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn eight_bit_scaling() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("mid.png");
        GrayImage::from_pixel(2, 2, Luma([128])).save(&p).unwrap();
        let img = load_image(&p).unwrap();
        assert!((img.get(0, 0) - 128.0 / 255.0).abs() < 1e-9);
    }

    #[test]
    fn colour_reduces_to_luminance() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("rgb.png");
        RgbImage::from_pixel(2, 2, image::Rgb([255, 255, 255])).save(&p).unwrap();
        assert!(load_image(&p).unwrap().as_slice().iter().all(|&v| v == 1.0));
        let p2 = dir.path().join("green.png");
        RgbImage::from_pixel(2, 2, image::Rgb([0, 255, 0])).save(&p2).unwrap();
        let g = load_image(&p2).unwrap().get(0, 0);
        assert!(g > 0.5 && g < 1.0, "{g}");
    }

    #[test]
    fn unreadable_file() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_image(dir.path().join("missing.png")), Err(HoloError::Image { .. })));
        let junk = dir.path().join("junk.png");
        std::fs::write(&junk, b"not an image").unwrap();
        assert!(load_image(&junk).is_err());
    }

    #[test]
    fn synthetic_images_in_range() {
        for kind in SyntheticKind::ALL {
            let img = synthetic_image(kind, 32).unwrap();
            assert_eq!(img.dims(), (32, 32));
            assert!(img.as_slice().iter().all(|v| (0.0..=1.0).contains(v)), "{kind:?}");
        }
        assert_eq!(synthetic_image(SyntheticKind::Gradient, 4).unwrap().get(3, 3), 1.0);
    }

    #[test]
    fn resolve_ids() {
        assert_eq!(resolve_image("synthetic:rings", 16).unwrap().dims(), (16, 16));
        assert!(resolve_image("synthetic:lena", 16).is_err());
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("wide.png");
        GrayImage::from_fn(40, 20, |x, _| Luma([(x * 6) as u8])).save(&p).unwrap();
        let img = resolve_image(p.to_str().unwrap(), 8).unwrap();
        assert_eq!(img.dims(), (8, 8));
        assert!(img.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
    }
}
