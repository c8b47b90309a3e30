//! Heuristic GS runtime model
//!
//! `t = C_numitr * C_machine * C_precision * C_software * (C_itr1 + C_itr2 * Nx * Ny * log(Nx) * log(Ny))` ms,
//! with base-2 logarithms. `C_numitr` is the iteration count passed to
//! [`predict_runtime`].

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::stats::{linear_fit, LinearFit};
use crate::algorithms::{run, AlgorithmConfig};
use crate::error::{HoloError, Result};
use crate::field::{embed_target, RealImage};
use crate::modulation::ModulationScheme;

/// Reference per-iteration constant overhead, milliseconds.
pub const REFERENCE_C_ITR1: f64 = 0.71;
/// Reference per-iteration scaling constant, milliseconds.
pub const REFERENCE_C_ITR2: f64 = 1.09e-6;

/// Relative cost of floating-point precisions against single precision, as `(low, high)`.
pub const PRECISION_FACTORS: [(&str, f64, f64); 3] = [("single", 1.0, 1.0), ("double", 1.96, 1.99), ("half", 0.67, 0.76)];

pub fn precision_factor(label: &str) -> Option<f64> {
    PRECISION_FACTORS
        .iter()
        .find(|(name, _, _)| *name == label)
        .map(|(_, lo, hi)| 0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuntimeModel {
    /// Constant per-iteration cost (memory transfer and I/O), ms.
    pub c_itr1: f64,
    /// Scaling constant against `Nx Ny log(Nx) log(Ny)`, ms.
    pub c_itr2: f64,
    pub c_machine: f64,
    pub c_software: f64,
    pub c_precision: f64,
    pub log_base: f64,
}

impl RuntimeModel {
    /// Constants measured on the original GPU workstation.
    pub fn reference() -> Self {
        RuntimeModel {
            c_itr1: REFERENCE_C_ITR1,
            c_itr2: REFERENCE_C_ITR2,
            ..Factors::default().model(0.0, 0.0)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c_itr1 > 0.0 && self.c_itr2 > 0.0) {
            return Err(HoloError::InvalidParameter(format!(
                "C_itr1 and C_itr2 must be positive, got {} and {}",
                self.c_itr1, self.c_itr2
            )));
        }
        Ok(())
    }
}

/// The multiplicative factors held fixed during a fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Factors {
    pub machine: f64,
    pub software: f64,
    pub precision: f64,
}

impl Default for Factors {
    fn default() -> Self {
        Factors {
            machine: 1.0,
            software: 1.0,
            precision: 1.0,
        }
    }
}

impl Factors {
    fn product(&self) -> f64 {
        self.machine * self.software * self.precision
    }

    fn model(&self, c_itr1: f64, c_itr2: f64) -> RuntimeModel {
        RuntimeModel {
            c_itr1,
            c_itr2,
            c_machine: self.machine,
            c_software: self.software,
            c_precision: self.precision,
            log_base: 2.0,
        }
    }
}

/// Size term `Nx Ny log2(Nx) log2(Ny)`.
pub fn size_term(nx: usize, ny: usize) -> f64 {
    let (x, y) = (nx as f64, ny as f64);
    x * y * x.log2() * y.log2()
}

pub fn predict_runtime(model: &RuntimeModel, nx: usize, ny: usize, iterations: usize) -> f64 {
    let (x, y) = (nx as f64, ny as f64);
    let logs = x.log(model.log_base) * y.log(model.log_base);
    iterations as f64 * model.c_machine * model.c_precision * model.c_software * (model.c_itr1 + model.c_itr2 * x * y * logs)
}

/// One timing observation of a whole run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingMeasurement {
    pub nx: usize,
    pub ny: usize,
    pub iterations: usize,
    pub total_ms: f64,
}

impl TimingMeasurement {
    pub fn per_iteration_ms(&self) -> f64 {
        self.total_ms / self.iterations as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeFit {
    pub model: RuntimeModel,
    /// Per-iteration residuals in ms, in measurement order.
    pub residuals: Vec<f64>,
    pub r_squared: f64,
}

/// Least-squares fit of `C_itr1`, `C_itr2` to per-iteration times.
pub fn fit_runtime_model(measurements: &[TimingMeasurement], factors: Factors) -> Result<RuntimeFit> {
    if let Some(m) = measurements.iter().find(|m| m.iterations == 0) {
        return Err(HoloError::InvalidParameter(format!("measurement {m:?} has zero iterations")));
    }
    let x: Vec<f64> = measurements.iter().map(|m| size_term(m.nx, m.ny)).collect();
    let y: Vec<f64> = measurements
        .iter()
        .map(|m| m.per_iteration_ms() / factors.product())
        .collect();
    let LinearFit {
        intercept,
        slope,
        r_squared,
        residuals,
    } = linear_fit(&x, &y).map_err(|_| {
        HoloError::Underdetermined("runtime fit needs at least two distinct resolutions".into())
    })?;
    Ok(RuntimeFit {
        model: factors.model(intercept, slope),
        residuals: residuals.iter().map(|r| r * factors.product()).collect(),
        r_squared,
    })
}

/// Fit of `t = a + b N^2 log2(N)^2` to per-iteration times at square sizes `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub a: f64,
    pub b: f64,
    pub residual_mse: f64,
    pub signal_variance: f64,
}

impl ScalingFit {
    /// Residual MSE as a fraction of the variance of the measured times.
    pub fn relative_mse(&self) -> f64 {
        self.residual_mse / self.signal_variance
    }
}

pub fn fit_scaling(sizes: &[usize], per_iteration_ms: &[f64]) -> Result<ScalingFit> {
    let x: Vec<f64> = sizes.iter().map(|&n| size_term(n, n)).collect();
    let fit = linear_fit(&x, per_iteration_ms)?;
    let m = super::stats::mean(per_iteration_ms);
    let signal_variance = per_iteration_ms.iter().map(|v| (v - m).powi(2)).sum::<f64>() / per_iteration_ms.len() as f64;
    Ok(ScalingFit {
        a: fit.intercept,
        b: fit.slope,
        residual_mse: fit.residual_mse(),
        signal_variance,
    })
}

/// Times GS runs on this machine, one measurement per repeat and hologram size.
///
/// `sizes` are hologram sizes; the target is a flat image of half the size.
/// Runs serially so measurements do not contend for cores.
pub fn measure_iteration_times(
    sizes: &[usize],
    iterations: usize,
    repeats: usize,
    scheme: &ModulationScheme,
) -> Result<Vec<TimingMeasurement>> {
    let mut out = Vec::new();
    for &n in sizes {
        if n < 2 || n % 2 != 0 {
            return Err(HoloError::InvalidDimensions { width: n, height: n });
        }
        let target = embed_target(&RealImage::new(n / 2, n / 2, vec![0.5; n * n / 4])?)?;
        // warm the plan cache and the allocator once per size
        run(&AlgorithmConfig::gs(*scheme, 1, 0), &target)?;
        for r in 0..repeats {
            let cfg = AlgorithmConfig::gs(*scheme, iterations, r as u64);
            let started = Instant::now();
            run(&cfg, &target)?;
            out.push(TimingMeasurement {
                nx: n,
                ny: n,
                iterations,
                total_ms: started.elapsed().as_secs_f64() * 1e3,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(model: &RuntimeModel, sizes: &[usize], iterations: usize) -> Vec<TimingMeasurement> {
        sizes
            .iter()
            .map(|&n| TimingMeasurement {
                nx: n,
                ny: n,
                iterations,
                total_ms: predict_runtime(model, n, n, iterations),
            })
            .collect()
    }

    #[test]
    fn recovers_reference_constants() {
        let reference = RuntimeModel::reference();
        let data = synthetic(&reference, &[128, 256, 512, 1024], 30);
        let fit = fit_runtime_model(&data, Factors::default()).unwrap();
        assert!(((fit.model.c_itr1 - 0.71) / 0.71).abs() < 1e-6);
        assert!(((fit.model.c_itr2 - 1.09e-6) / 1.09e-6).abs() < 1e-6);
        assert!(fit.r_squared > 0.999_999);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-9));
    }

    #[test]
    fn single_resolution_is_underdetermined() {
        let data = vec![
            TimingMeasurement { nx: 256, ny: 256, iterations: 10, total_ms: 50.0 },
            TimingMeasurement { nx: 256, ny: 256, iterations: 10, total_ms: 50.0 },
        ];
        assert!(matches!(fit_runtime_model(&data, Factors::default()), Err(HoloError::Underdetermined(_))));
        assert!(fit_runtime_model(&[], Factors::default()).is_err());
    }

    #[test]
    fn prediction_examples() {
        let m = RuntimeModel::reference();
        assert_eq!(predict_runtime(&m, 512, 512, 0), 0.0);
        // 0.71 + 1.09e-6 * 512^2 * 9 * 9
        let expected = 0.71 + 1.09e-6 * 262144.0 * 81.0;
        assert!((predict_runtime(&m, 512, 512, 1) - expected).abs() < 1e-12);
        assert!((expected - 23.8547).abs() < 1e-4);
        let doubled = RuntimeModel { c_machine: 2.0, ..m };
        assert!((predict_runtime(&doubled, 300, 200, 7) - 2.0 * predict_runtime(&m, 300, 200, 7)).abs() < 1e-12);
    }

    #[test]
    fn fixed_factors_divide_out() {
        let f = Factors { machine: 2.0, software: 0.5, precision: 1.975 };
        let truth = RuntimeModel { c_itr1: 0.3, c_itr2: 2e-6, ..RuntimeModel::reference() };
        let truth = RuntimeModel { c_machine: f.machine, c_software: f.software, c_precision: f.precision, ..truth };
        let fit = fit_runtime_model(&synthetic(&truth, &[64, 256], 5), f).unwrap();
        assert!((fit.model.c_itr1 - 0.3).abs() < 1e-9);
        assert!((fit.model.c_itr2 - 2e-6).abs() < 1e-15);
        assert_eq!(fit.model.c_machine, 2.0);
    }

    #[test]
    fn precision_table() {
        assert_eq!(precision_factor("single"), Some(1.0));
        assert!((precision_factor("double").unwrap() - 1.975).abs() < 1e-12);
        assert_eq!(precision_factor("quad"), None);
    }

    #[test]
    fn scaling_fit_of_exact_curve() {
        let sizes = [128, 256, 512, 1024];
        let t: Vec<f64> = sizes.iter().map(|&n| 0.2 + 3e-7 * size_term(n, n)).collect();
        let fit = fit_scaling(&sizes, &t).unwrap();
        assert!(fit.relative_mse() < 1e-12);
        assert!((fit.a - 0.2).abs() < 1e-9);
    }

    #[test]
    fn model_validation() {
        assert!(RuntimeModel::reference().validate().is_ok());
        assert!(RuntimeModel { c_itr2: 0.0, ..RuntimeModel::reference() }.validate().is_err());
    }
}
