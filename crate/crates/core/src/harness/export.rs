use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::plan::ExperimentPlan;
use super::stats::Curves;
use crate::algorithms::{StartKind, Variant};
use crate::error::{HoloError, Result};
use crate::metrics::{Convergence, Cycle};
use crate::modulation::{Levels, ModulationKind};

/// Where and how a results document was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub machine: String,
    pub precision: String,
    pub os: String,
    pub arch: String,
    pub threads: usize,
    pub version: String,
    /// Image whose horizon MSE defines NMSE = 1 scaling.
    pub nmse_reference: String,
    /// 1-based iteration at which normalizers were taken.
    pub nmse_horizon: usize,
    pub epsilon: f64,
}

/// Raw summary of one seeded run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    /// Per-iteration MSE, before normalization.
    pub mse_pi: Vec<f64>,
    /// Plateau of this run's NMSE series (MSE when the cell has no normalizer).
    pub convergence: Option<Convergence>,
    pub cycle: Option<Cycle>,
    /// `(max - min) / mean` of the MSE over the last full cycle.
    pub cycle_mse_variation: Option<f64>,
    pub mean_iteration_ms: f64,
    pub final_hash: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub runs_with_cycle: usize,
    pub min_period: Option<usize>,
    pub max_period: Option<usize>,
    pub max_mse_variation: Option<f64>,
}

impl CycleReport {
    pub fn from_runs(runs: &[RunSummary]) -> Self {
        let periods: Vec<usize> = runs.iter().filter_map(|r| r.cycle.map(|c| c.period)).collect();
        CycleReport {
            runs_with_cycle: periods.len(),
            min_period: periods.iter().copied().min(),
            max_period: periods.iter().copied().max(),
            max_mse_variation: runs.iter().filter_map(|r| r.cycle_mse_variation).reduce(f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingSummary {
    /// Mean over runs of the mean iteration wall time.
    pub mean_iteration_ms: f64,
    pub ci2sigma_ms: f64,
    pub total_ms: f64,
}

/// Aggregated result of one cell of the run matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub image: String,
    pub resolution: usize,
    pub kind: ModulationKind,
    pub levels: Levels,
    #[serde(flatten)]
    pub variant: Variant,
    pub start: StartKind,
    pub seeds: Vec<u64>,
    /// Set when any run of the cell failed; the aggregates are then absent.
    pub error: Option<String>,
    pub nmse_ratio: Option<f64>,
    /// NMSE mean and 2-sigma half-width per iteration.
    pub curves: Option<Curves>,
    pub mse_curves: Option<Curves>,
    /// Plateau of the mean NMSE curve (mean MSE without a normalizer).
    pub convergence: Option<Convergence>,
    pub cycle: Option<CycleReport>,
    pub timing: Option<TimingSummary>,
    pub runs: Vec<RunSummary>,
}

impl CellResult {
    /// NMSE curve when normalized, otherwise the MSE curve.
    pub fn error_curves(&self) -> Option<&Curves> {
        self.curves.as_ref().or(self.mse_curves.as_ref())
    }

    pub fn is_failed(&self) -> bool {
        self.error.is_some()
    }
}

/// One document per plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsDocument {
    pub plan: ExperimentPlan,
    pub environment: Environment,
    pub cells: Vec<CellResult>,
}

impl ResultsDocument {
    pub fn failed_cells(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| c.is_failed())
    }
}

pub fn export_results(results: &ResultsDocument, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(results)?;
    fs::write(path, text + "\n").map_err(|e| HoloError::io(path, e))
}

pub fn import_results(path: impl AsRef<Path>) -> Result<ResultsDocument> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| HoloError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
