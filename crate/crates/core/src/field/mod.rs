//! Complex field container, the FFT pipeline built from 1-D transforms, and
//! target embedding.
//!
//! A [`ComplexField`] is stored row-major: element `(x, y)` lives at
//! `data[y * width + x]`. Holography fields always have even, non-zero
//! dimensions so that the quadrant shift is an exact involution.

mod embed;
mod fft;
mod image;

pub use embed::{embed_target, EmbeddedTarget};
pub use fft::{
    fft2_centered, fft2_composed, fft_1d_rows, fft_rows_in_place, Direction, Propagator,
};
pub use image::RealImage;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};

/// Axis-aligned pixel rectangle, half-open: `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Rect {
    pub fn new(x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        Rect { x0, y0, x1, y1 }
    }

    pub fn full(width: usize, height: usize) -> Self {
        Rect::new(0, 0, width, height)
    }

    pub fn width(&self) -> usize {
        self.x1.saturating_sub(self.x0)
    }

    pub fn height(&self) -> usize {
        self.y1.saturating_sub(self.y0)
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        self.area() == 0
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    pub fn fits_within(&self, width: usize, height: usize) -> bool {
        self.x1 <= width && self.y1 <= height
    }

    /// Row-major indices of every pixel in the rectangle for a field of the given width.
    pub fn indices(&self, width: usize) -> impl Iterator<Item = usize> + '_ {
        (self.y0..self.y1).flat_map(move |y| (self.x0..self.x1).map(move |x| y * width + x))
    }
}

/// A 2-D array of complex amplitudes (hologram or replay field).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    width: usize,
    height: usize,
    data: Vec<Complex64>,
}

impl ComplexField {
    /// Builds a field, rejecting odd or zero dimensions and mismatched data.
    pub fn new(width: usize, height: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dims(width, height)?;
        if data.len() != width * height {
            return Err(HoloError::DataLength {
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(ComplexField {
            width,
            height,
            data,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::filled(width, height, Complex64::new(0.0, 0.0))
    }

    pub fn filled(width: usize, height: usize, value: Complex64) -> Result<Self> {
        check_dims(width, height)?;
        Ok(ComplexField {
            width,
            height,
            data: vec![value; width * height],
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        check_dims(width, height)?;
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Ok(ComplexField {
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

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize) -> Complex64 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: Complex64) {
        self.data[y * self.width + x] = value;
    }

    /// Returns a copy with `f` applied to every pixel.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> ComplexField {
        ComplexField {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Total energy `sum |f|^2`.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn transpose(&self) -> ComplexField {
        ComplexField {
            width: self.height,
            height: self.width,
            data: transpose_slice(&self.data, self.width, self.height),
        }
    }

    /// Swaps diagonal quadrants. Exact involution for even dimensions.
    pub fn fftshift(&self) -> ComplexField {
        let mut out = self.clone();
        fftshift_in_place(&mut out.data, self.width, self.height);
        out
    }

    /// Copies the pixels of `rect` into a new row-major vector.
    pub fn extract(&self, rect: &Rect) -> Vec<Complex64> {
        rect.indices(self.width).map(|i| self.data[i]).collect()
    }

    pub(crate) fn ensure_same_dims(&self, other: &ComplexField) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(HoloError::DimensionMismatch {
                left: self.dims(),
                right: other.dims(),
            });
        }
        Ok(())
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width < 2 || height < 2 || width % 2 != 0 || height % 2 != 0 {
        return Err(HoloError::InvalidDimensions { width, height });
    }
    Ok(())
}

/// Transposes a row-major `width x height` buffer into a `height x width` one.
///
/// Works for any dimensions, including odd or single-row buffers.
pub fn transpose_slice<T: Copy>(data: &[T], width: usize, height: usize) -> Vec<T> {
    assert_eq!(data.len(), width * height, "buffer does not match dimensions");
    let mut out = Vec::with_capacity(data.len());
    for x in 0..width {
        for y in 0..height {
            out.push(data[y * width + x]);
        }
    }
    out
}

/// Quadrant swap on a row-major buffer with even dimensions.
pub(crate) fn fftshift_in_place<T>(data: &mut [T], width: usize, height: usize) {
    debug_assert!(width % 2 == 0 && height % 2 == 0);
    let hw = width / 2;
    let hh = height / 2;
    for y in 0..hh {
        let (top, bottom) = data.split_at_mut((y + hh) * width);
        let row_a = &mut top[y * width..(y + 1) * width];
        let row_b = &mut bottom[..width];
        // quadrant 2 <-> 4 and 1 <-> 3
        row_a[..hw].swap_with_slice(&mut row_b[hw..]);
        row_a[hw..].swap_with_slice(&mut row_b[..hw]);
    }
}
