use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::{fftshift_in_place, transpose_slice, ComplexField};

/// Transform direction. Forward is unnormalized; inverse carries the `1/n`
/// factor so that `inverse(forward(x)) == x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

type PlanCache = Mutex<HashMap<(usize, Direction), Arc<dyn Fft<f64>>>>;

fn plan(len: usize, direction: Direction) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<PlanCache> = OnceLock::new();
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry((len, direction))
        .or_insert_with(|| {
            let mut planner = PLANNER
                .get_or_init(|| Mutex::new(FftPlanner::new()))
                .lock()
                .expect("fft planner poisoned");
            match direction {
                Direction::Forward => planner.plan_fft_forward(len),
                Direction::Inverse => planner.plan_fft_inverse(len),
            }
        })
        .clone()
}

/// Transforms every row of a row-major buffer in place.
///
/// Accepts any row length, so single-row and odd-length buffers work here even
/// though [`ComplexField`] itself requires even dimensions.
pub fn fft_rows_in_place(data: &mut [Complex64], width: usize, direction: Direction) {
    assert!(width > 0 && data.len() % width == 0, "buffer is not a whole number of rows");
    let fft = plan(width, direction);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
    if direction == Direction::Inverse {
        let scale = 1.0 / width as f64;
        data.iter_mut().for_each(|v| *v *= scale);
    }
}

/// Independent 1-D transform of each row.
pub fn fft_1d_rows(field: &ComplexField, direction: Direction) -> ComplexField {
    let mut out = field.clone();
    fft_rows_in_place(&mut out.data, field.width, direction);
    out
}

/// `transpose . fft . transpose . fft`: a 2-D DFT from 1-D row transforms.
pub fn fft2_composed(field: &ComplexField, direction: Direction) -> ComplexField {
    let rows = fft_1d_rows(field, direction);
    let mut cols = transpose_slice(&rows.data, rows.width, rows.height);
    fft_rows_in_place(&mut cols, field.height, direction);
    ComplexField {
        width: field.width,
        height: field.height,
        data: transpose_slice(&cols, field.height, field.width),
    }
}

/// `fftshift . transpose . fft . transpose . fft . fftshift`: the 2-D DFT with the
/// zero order at the centre pixel `(N_x/2, N_y/2)` on both sides.
pub fn fft2_centered(field: &ComplexField, direction: Direction) -> ComplexField {
    fft2_composed(&field.fftshift(), direction).fftshift()
}

/// Pre-planned centred 2-D transform for one field size.
///
/// Computes the same transform as [`fft2_centered`] but works in place, transforming
/// columns through a gather buffer instead of two full transposes. Used by the
/// iteration loop, where propagation dominates runtime.
pub struct Propagator {
    width: usize,
    height: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    column: Vec<Complex64>,
}

impl std::fmt::Debug for Propagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Propagator")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish()
    }
}

impl Propagator {
    pub fn new(width: usize, height: usize) -> Self {
        let row_fwd = plan(width, Direction::Forward);
        let row_inv = plan(width, Direction::Inverse);
        let col_fwd = plan(height, Direction::Forward);
        let col_inv = plan(height, Direction::Inverse);
        let scratch_len = [&row_fwd, &row_inv, &col_fwd, &col_inv]
            .iter()
            .map(|p| p.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        Propagator {
            width,
            height,
            row_fwd,
            row_inv,
            col_fwd,
            col_inv,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            column: vec![Complex64::new(0.0, 0.0); height],
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Centred transform of `field` in place.
    pub fn transform(&mut self, field: &mut ComplexField, direction: Direction) {
        assert_eq!(field.dims(), self.dims(), "propagator size mismatch");
        let (w, h) = (self.width, self.height);
        let (row, col) = match direction {
            Direction::Forward => (&self.row_fwd, &self.col_fwd),
            Direction::Inverse => (&self.row_inv, &self.col_inv),
        };
        let data = &mut field.data;
        fftshift_in_place(data, w, h);
        row.process_with_scratch(data, &mut self.scratch);
        for x in 0..w {
            for y in 0..h {
                self.column[y] = data[y * w + x];
            }
            col.process_with_scratch(&mut self.column, &mut self.scratch);
            for y in 0..h {
                data[y * w + x] = self.column[y];
            }
        }
        fftshift_in_place(data, w, h);
        if direction == Direction::Inverse {
            let scale = 1.0 / (w * h) as f64;
            data.iter_mut().for_each(|v| *v *= scale);
        }
    }

    pub fn forward(&mut self, field: &mut ComplexField) {
        self.transform(field, Direction::Forward);
    }

    pub fn inverse(&mut self, field: &mut ComplexField) {
        self.transform(field, Direction::Inverse);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Direct O(n^2) DFT, forward, unnormalized.
    fn direct_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / n as f64))
                    .sum()
            })
            .collect()
    }

    fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
        let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
        (num / den.max(f64::MIN_POSITIVE)).sqrt()
    }

    #[test]
    fn constant_row_concentrates_in_dc() {
        let mut row = vec![c(1.0, 0.0); 4];
        fft_rows_in_place(&mut row, 4, Direction::Forward);
        assert_eq!(row, vec![c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn delta_row_is_flat() {
        let mut row = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        fft_rows_in_place(&mut row, 4, Direction::Forward);
        assert_eq!(row, vec![c(1.0, 0.0); 4]);
    }

    #[test]
    fn random_row_matches_direct_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let row: Vec<_> = (0..8).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let expected = direct_dft(&row);
        let mut got = row.clone();
        fft_rows_in_place(&mut got, 8, Direction::Forward);
        assert!(rel_err(&got, &expected) < 1e-10);
        fft_rows_in_place(&mut got, 8, Direction::Inverse);
        assert!(rel_err(&got, &row) < 1e-12);
    }

    #[test]
    fn rows_are_independent() {
        let f = ComplexField::from_fn(4, 2, |x, y| if y == 0 { c(1.0, 0.0) } else if x == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) }).unwrap();
        let g = fft_1d_rows(&f, Direction::Forward);
        assert_eq!(&g.as_slice()[..4], &[c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(&g.as_slice()[4..], &[c(1.0, 0.0); 4]);
    }

    #[test]
    fn uniform_field_lands_in_centre() {
        let f = ComplexField::filled(4, 4, c(1.0, 0.0)).unwrap();
        let g = fft2_centered(&f, Direction::Forward);
        for y in 0..4 {
            for x in 0..4 {
                let v = g.get(x, y);
                if (x, y) == (2, 2) {
                    assert!((v - c(16.0, 0.0)).norm() < 1e-12);
                } else {
                    assert!(v.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn propagator_agrees_with_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = ComplexField::from_fn(16, 8, |_, _| c(rng.random(), rng.random())).unwrap();
        let mut p = Propagator::new(16, 8);
        for dir in [Direction::Forward, Direction::Inverse] {
            let mut g = f.clone();
            p.transform(&mut g, dir);
            let h = fft2_centered(&f, dir);
            assert!(rel_err(g.as_slice(), h.as_slice()) < 1e-10);
        }
    }
}
