use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::{fft2_centered, ComplexField, Direction};
use crate::modulation::{ModulationScheme, Quantiser};

/// Unit-amplitude field with phase drawn uniformly from `[0, 2 pi)`.
pub fn random_phase_field(width: usize, height: usize, seed: u64) -> Result<ComplexField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexField::from_fn(width, height, |_, _| Complex64::from_polar(1.0, rng.random_range(0.0..TAU)))
}

/// Random starting hologram: uniform phase on the unit circle, then quantised.
pub fn start_random(scheme: &ModulationScheme, width: usize, height: usize, seed: u64) -> Result<ComplexField> {
    let q = Quantiser::new(scheme)?;
    let mut field = random_phase_field(width, height, seed)?;
    q.project_in_place(&mut field);
    Ok(field)
}

/// Back-projected starting hologram: inverse transform of the target, then quantised.
pub fn start_back_projection(target: &ComplexField, scheme: &ModulationScheme) -> Result<ComplexField> {
    let q = Quantiser::new(scheme)?;
    let mut field = fft2_centered(target, Direction::Inverse);
    q.project_in_place(&mut field);
    Ok(field)
}
