use num_complex::Complex64;

use super::{ComplexField, Rect, RealImage};
use crate::error::{HoloError, Result};

/// A target image placed in the upper-left quadrant of a replay field twice its size.
///
/// The other three quadrants carry no constraint. With the zero order at the
/// field centre, the conjugate twin of a real hologram falls in the lower-right
/// quadrant, clear of the target.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedTarget {
    field: ComplexField,
    region: Rect,
    amplitude: Vec<f64>,
}

impl EmbeddedTarget {
    /// Wraps an already embedded field together with the region that carries the target.
    pub fn from_parts(field: ComplexField, region: Rect) -> Result<Self> {
        if region.is_empty() || !region.fits_within(field.width(), field.height()) {
            return Err(HoloError::UnsupportedGeometry(format!(
                "target region {region:?} outside {}x{} field",
                field.width(),
                field.height()
            )));
        }
        let amplitude = field.extract(&region).iter().map(|v| v.norm()).collect();
        Ok(EmbeddedTarget {
            field,
            region,
            amplitude,
        })
    }

    pub fn field(&self) -> &ComplexField {
        &self.field
    }

    pub fn region(&self) -> Rect {
        self.region
    }

    /// Target amplitudes inside the region, row-major.
    pub fn amplitude(&self) -> &[f64] {
        &self.amplitude
    }

    /// Sum of squared target amplitudes.
    pub fn energy(&self) -> f64 {
        self.amplitude.iter().map(|a| a * a).sum()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.field.dims()
    }
}

/// Embeds a square `N x N` target into a `2N x 2N` zero field.
pub fn embed_target(target: &RealImage) -> Result<EmbeddedTarget> {
    if !target.is_square() {
        return Err(HoloError::UnsupportedGeometry(format!(
            "target must be square, got {}x{}",
            target.width(),
            target.height()
        )));
    }
    if let Some(bad) = target.as_slice().iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(HoloError::InvalidParameter(format!(
            "target values must lie in [0, 1], found {bad}"
        )));
    }
    let n = target.width();
    let mut field = ComplexField::zeros(2 * n, 2 * n)?;
    for y in 0..n {
        for x in 0..n {
            field.set(x, y, Complex64::new(target.get(x, y), 0.0));
        }
    }
    EmbeddedTarget::from_parts(field, Rect::new(0, 0, n, n))
}
