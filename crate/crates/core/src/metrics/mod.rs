//! Error metrics, plateau convergence and hologram cycle detection.
//!
//! MSE metrics compare target and replay samples directly. Callers are
//! responsible for any energy normalization of the replay field before
//! calling them; no scale fitting happens here.

mod convergence;
mod cycle;
mod nmse;
mod ssim;

pub use convergence::{detect_convergence, plateau_estimate, Convergence, DEFAULT_EPSILON};
pub use cycle::{detect_cycle, Cycle};
pub use nmse::{nmse, NormalizationTable};
pub use ssim::{ssim, SsimParams};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};
use crate::field::ComplexField;

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b || a == 0 {
        return Err(HoloError::DimensionMismatch {
            left: (a, 1),
            right: (b, 1),
        });
    }
    Ok(())
}

/// Phase-insensitive MSE: mean of `(|T| - |R|)^2`.
pub fn mse_pi(target: &[Complex64], replay: &[Complex64]) -> Result<f64> {
    check_len(target.len(), replay.len())?;
    let sum: f64 = target
        .iter()
        .zip(replay)
        .map(|(t, r)| {
            let d = t.norm() - r.norm();
            d * d
        })
        .sum();
    Ok(sum / target.len() as f64)
}

/// Phase-sensitive MSE: mean of `|T - R|^2`.
pub fn mse_ps(target: &[Complex64], replay: &[Complex64]) -> Result<f64> {
    check_len(target.len(), replay.len())?;
    let sum: f64 = target.iter().zip(replay).map(|(t, r)| (t - r).norm_sqr()).sum();
    Ok(sum / target.len() as f64)
}

/// All metrics for one target/replay pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub mse_pi: f64,
    pub mse_ps: f64,
    /// Global SSIM of the amplitude images.
    pub ssim: f64,
    pub nmse: Option<f64>,
}

impl MetricReport {
    /// Metrics between two equally sized fields. SSIM uses amplitudes with `L = 1`.
    pub fn between(target: &ComplexField, replay: &ComplexField) -> Result<Self> {
        target.ensure_same_dims(replay)?;
        let (t, r) = (target.as_slice(), replay.as_slice());
        let ta: Vec<f64> = t.iter().map(|v| v.norm()).collect();
        let ra: Vec<f64> = r.iter().map(|v| v.norm()).collect();
        Ok(MetricReport {
            mse_pi: mse_pi(t, r)?,
            mse_ps: mse_ps(t, r)?,
            ssim: ssim(&ta, &ra, SsimParams::default())?,
            nmse: None,
        })
    }

    pub fn with_nmse(mut self, image_id: &str, table: &NormalizationTable) -> Result<Self> {
        self.nmse = Some(nmse(self.mse_pi, image_id, table)?);
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identical_inputs_have_zero_error() {
        let t = vec![c(0.3, -0.2), c(1.0, 0.5), c(0.0, 0.0)];
        assert_eq!(mse_pi(&t, &t).unwrap(), 0.0);
        assert_eq!(mse_ps(&t, &t).unwrap(), 0.0);
    }

    #[test]
    fn phase_rotation_is_invisible_to_mse_pi() {
        let t = vec![c(0.3, -0.2), c(1.0, 0.5), c(0.7, 0.0)];
        let r: Vec<_> = t
            .iter()
            .enumerate()
            .map(|(i, v)| v * Complex64::from_polar(1.0, 0.7 * i as f64 + 0.1))
            .collect();
        assert!(mse_pi(&t, &r).unwrap() < 1e-15);
        assert!(mse_ps(&t, &r).unwrap() > 0.01);
    }

    #[test]
    fn hand_evaluated_examples() {
        let t = [c(1.0, 0.0), c(0.0, 0.0)];
        let r = [c(0.0, 0.0), c(1.0, 0.0)];
        assert_eq!(mse_pi(&t, &r).unwrap(), 1.0);
        assert_eq!(mse_ps(&t, &r).unwrap(), 1.0);
        assert_eq!(mse_ps(&[c(1.0, 0.0)], &[c(-1.0, 0.0)]).unwrap(), 4.0);
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(matches!(
            mse_pi(&[c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]),
            Err(HoloError::DimensionMismatch { .. })
        ));
        assert!(mse_ps(&[], &[]).is_err());
        let a = ComplexField::zeros(4, 2).unwrap();
        let b = ComplexField::zeros(2, 4).unwrap();
        assert!(MetricReport::between(&a, &b).is_err());
    }

    #[test]
    fn report_on_fields() {
        let a = ComplexField::from_fn(4, 4, |x, y| c(x as f64 / 4.0, y as f64 / 8.0)).unwrap();
        let rep = MetricReport::between(&a, &a).unwrap();
        assert_eq!(rep.mse_pi, 0.0);
        assert_eq!(rep.mse_ps, 0.0);
        assert!((rep.ssim - 1.0).abs() < 1e-12);
        let table = NormalizationTable::from_horizon_mse("ref", [("ref".to_string(), 2.0), ("b".to_string(), 4.0)]).unwrap();
        let rep = MetricReport { mse_pi: 0.5, ..rep }.with_nmse("b", &table).unwrap();
        assert_eq!(rep.nmse, Some(0.25));
    }

    fn pairs() -> impl Strategy<Value = (Vec<Complex64>, Vec<Complex64>)> {
        (1usize..32).prop_flat_map(|n| {
            let v = prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| c(a, b)), n);
            (v.clone(), v)
        })
    }

    proptest! {
        #[test]
        fn symmetric_and_ordered((t, r) in pairs()) {
            let pi = mse_pi(&t, &r).unwrap();
            let ps = mse_ps(&t, &r).unwrap();
            prop_assert_eq!(pi, mse_pi(&r, &t).unwrap());
            prop_assert_eq!(ps, mse_ps(&r, &t).unwrap());
            prop_assert!(pi >= 0.0);
            prop_assert!(pi <= ps + 1e-9);
        }

        #[test]
        fn rotation_invariance((t, r) in pairs(), theta in prop::collection::vec(0.0f64..6.3, 32)) {
            let rotated: Vec<_> = r.iter().zip(&theta).map(|(v, th)| v * Complex64::from_polar(1.0, *th)).collect();
            let a = mse_pi(&t, &r).unwrap();
            let b = mse_pi(&t, &rotated).unwrap();
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}
