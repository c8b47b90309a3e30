use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (`n - 1` denominator); 0 for fewer than two values.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Two standard errors of the mean, `2 s / sqrt(n)`.
pub fn ci2sigma(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    2.0 * sample_std(xs) / (xs.len() as f64).sqrt()
}

/// Per-iteration mean and 2-sigma half-width over a set of equal-length curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curves {
    pub mean: Vec<f64>,
    pub ci2sigma: Vec<f64>,
}

impl Curves {
    pub fn from_runs(runs: &[Vec<f64>]) -> Self {
        let len = runs.first().map_or(0, Vec::len);
        let mut mean_curve = Vec::with_capacity(len);
        let mut ci = Vec::with_capacity(len);
        let mut column = Vec::with_capacity(runs.len());
        for t in 0..len {
            column.clear();
            column.extend(runs.iter().map(|r| r[t]));
            mean_curve.push(mean(&column));
            ci.push(ci2sigma(&column));
        }
        Curves {
            mean: mean_curve,
            ci2sigma: ci,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Curves {
            mean: self.mean.iter().map(|v| v * factor).collect(),
            ci2sigma: self.ci2sigma.iter().map(|v| v * factor.abs()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }
}

/// Ordinary least squares `y = intercept + slope * x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
    pub residuals: Vec<f64>,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }

    pub fn residual_mse(&self) -> f64 {
        if self.residuals.is_empty() {
            return 0.0;
        }
        self.residuals.iter().map(|r| r * r).sum::<f64>() / self.residuals.len() as f64
    }
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(HoloError::DimensionMismatch {
            left: (x.len(), 1),
            right: (y.len(), 1),
        });
    }
    let mx = mean(x);
    let my = mean(y);
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if x.len() < 2 || !(sxx > 0.0) {
        return Err(HoloError::Underdetermined(format!(
            "need at least two distinct x values, got {} points",
            x.len()
        )));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - (intercept + slope * a)).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(LinearFit {
        intercept,
        slope,
        r_squared,
        residuals,
    })
}
