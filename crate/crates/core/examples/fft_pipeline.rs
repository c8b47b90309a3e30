//! The centred FFT pipeline: zero order position, round trip and Parseval.

use holobench::field::{fft2_centered, fft2_composed, ComplexField, Direction};
use num_complex::Complex64;

fn main() -> holobench::Result<()> {
    let n = 8;
    let flat = ComplexField::filled(n, n, Complex64::new(1.0, 0.0))?;
    let replay = fft2_centered(&flat, Direction::Forward);
    let peak = (0..n * n).max_by(|&a, &b| replay.as_slice()[a].norm().total_cmp(&replay.as_slice()[b].norm())).unwrap();
    println!("uniform {n}x{n} field: all energy at ({}, {}) = {}", peak % n, peak / n, replay.as_slice()[peak]);

    let field = ComplexField::from_fn(64, 32, |x, y| Complex64::from_polar(1.0 + (x % 3) as f64, 0.1 * (x * y) as f64))?;
    let forward = fft2_centered(&field, Direction::Forward);
    let back = fft2_centered(&forward, Direction::Inverse);
    let err = back.as_slice().iter().zip(field.as_slice()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("64x32 round trip max error {err:.2e}");
    println!(
        "Parseval: sum|F|^2 / (NxNy sum|f|^2) = {:.12}",
        forward.energy() / (field.len() as f64 * field.energy())
    );

    // the centred transform is the plain one with both fftshifts applied
    let composed = fft2_composed(&field.fftshift(), Direction::Forward).fftshift();
    let diff = composed.as_slice().iter().zip(forward.as_slice()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("fftshift . fft2 . fftshift vs fft2_centered: max difference {diff:.2e}");
    Ok(())
}
