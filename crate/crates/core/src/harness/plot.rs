//! CSV tables for plotting error and timing results.
//!
//! Every table is derived from a [`ResultsDocument`]; failed cells are skipped.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::export::{CellResult, ResultsDocument};
use super::runtime::size_term;
use super::stats::{ci2sigma, linear_fit, mean};
use crate::error::{HoloError, Result};
use crate::metrics::plateau_estimate;
use crate::modulation::Levels;

pub const ERROR_VS_ITERATION: &str = "error_vs_iteration.csv";
pub const ERROR_VS_LEVELS: &str = "error_vs_levels.csv";
pub const ERROR_VS_LEVELS_FIT: &str = "error_vs_levels_fit.csv";
pub const ERROR_VS_RESOLUTION: &str = "error_vs_resolution.csv";
pub const TIME_VS_RESOLUTION: &str = "time_vs_resolution.csv";

/// Minimum distance, in log2 units, for the binary point to count as an outlier.
pub const BINARY_OUTLIER_FLOOR: f64 = 0.25;
/// Outlier threshold in units of the multi-level fit's RMS residual.
pub const BINARY_OUTLIER_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRow {
    pub image: String,
    pub resolution: usize,
    pub levels: String,
    pub variant: String,
    pub start: String,
    pub iteration: usize,
    pub mean: f64,
    pub ci2sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub image: String,
    pub resolution: usize,
    pub variant: String,
    pub start: String,
    pub levels: u32,
    pub log2_levels: f64,
    pub convergent_error: f64,
    pub log2_error: f64,
    pub ci2sigma: f64,
    /// False when some run never met the plateau test and its tail mean was used.
    pub all_converged: bool,
}

/// Straight-line fit of `log2(error)` against `log2(levels)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSweepFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
    pub binary_included: bool,
    /// Binary point minus the multi-level fit's extrapolation, in log2 units.
    pub binary_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelFitRow {
    pub image: String,
    pub resolution: usize,
    pub variant: String,
    pub start: String,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
    pub binary_included: bool,
    pub binary_residual: Option<f64>,
}

impl LevelFitRow {
    pub fn fit(&self) -> LevelSweepFit {
        LevelSweepFit {
            slope: self.slope,
            intercept: self.intercept,
            r_squared: self.r_squared,
            points: self.points,
            binary_included: self.binary_included,
            binary_residual: self.binary_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeRow {
    pub image: String,
    pub levels: String,
    pub variant: String,
    pub start: String,
    pub resolution: usize,
    pub hologram_size: usize,
    pub size_term: f64,
    pub mean_iteration_ms: f64,
    pub ci2sigma_ms: f64,
}

/// Fits a level sweep given `(levels, convergent error)` points.
///
/// The binary point is dropped when it sits further than
/// `max(BINARY_OUTLIER_SIGMAS * rms, BINARY_OUTLIER_FLOOR)` from the line
/// through the other points; otherwise all points are fitted.
pub fn fit_level_sweep(points: &[(u32, f64)]) -> Result<LevelSweepFit> {
    let log_points: Vec<(u32, f64, f64)> = points
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|&(l, e)| (l, f64::from(l).log2(), e.log2()))
        .collect();
    let fit_of = |pts: &[&(u32, f64, f64)]| {
        let (x, y): (Vec<f64>, Vec<f64>) = pts.iter().map(|p| (p.1, p.2)).unzip();
        linear_fit(&x, &y)
    };
    let all: Vec<&(u32, f64, f64)> = log_points.iter().collect();
    let multi: Vec<&(u32, f64, f64)> = log_points.iter().filter(|p| p.0 > 2).collect();
    let binary = log_points.iter().find(|p| p.0 == 2);

    let (fit, binary_included, binary_residual) = match binary {
        Some(b) if multi.len() >= 3 => {
            let reduced = fit_of(&multi)?;
            let rms = reduced.residual_mse().sqrt();
            let residual = b.2 - reduced.predict(b.1);
            if residual.abs() > (BINARY_OUTLIER_SIGMAS * rms).max(BINARY_OUTLIER_FLOOR) {
                (reduced, false, Some(residual))
            } else {
                (fit_of(&all)?, true, Some(residual))
            }
        }
        Some(_) => (fit_of(&all)?, true, None),
        None => (fit_of(&all)?, false, None),
    };
    Ok(LevelSweepFit {
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        points: if binary_included { all.len() } else { multi.len() },
        binary_included,
        binary_residual,
    })
}

/// Writes all tables into `dir` and returns their paths.
pub fn emit_plot_data(results: &ResultsDocument, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    if results.cells.iter().all(CellResult::is_failed) {
        return Err(HoloError::InvalidParameter("no successful cells to tabulate".into()));
    }
    fs::create_dir_all(dir).map_err(|e| HoloError::io(dir, e))?;
    let mut written = Vec::new();

    written.push(write_table(dir, ERROR_VS_ITERATION, &iteration_rows(results))?);
    let levels = level_rows(results);
    written.push(write_table(dir, ERROR_VS_LEVELS, &levels)?);
    written.push(write_table(dir, ERROR_VS_LEVELS_FIT, &level_fit_rows(&levels))?);
    let mut by_resolution = iteration_rows(results);
    by_resolution.sort_by(|a, b| {
        (&a.image, &a.levels, &a.variant, &a.start, a.iteration, a.resolution)
            .cmp(&(&b.image, &b.levels, &b.variant, &b.start, b.iteration, b.resolution))
    });
    written.push(write_table(dir, ERROR_VS_RESOLUTION, &by_resolution)?);
    written.push(write_table(dir, TIME_VS_RESOLUTION, &time_rows(results))?);
    Ok(written)
}

fn ok_cells(results: &ResultsDocument) -> impl Iterator<Item = &CellResult> {
    results.cells.iter().filter(|c| !c.is_failed())
}

pub fn iteration_rows(results: &ResultsDocument) -> Vec<IterationRow> {
    let mut rows = Vec::new();
    for cell in ok_cells(results) {
        let Some(curves) = cell.error_curves() else { continue };
        for (t, (&m, &ci)) in curves.mean.iter().zip(&curves.ci2sigma).enumerate() {
            rows.push(IterationRow {
                image: cell.image.clone(),
                resolution: cell.resolution,
                levels: cell.levels.to_string(),
                variant: cell.variant.label(),
                start: cell.start.to_string(),
                iteration: t + 1,
                mean: m,
                ci2sigma: ci,
            });
        }
    }
    rows
}

/// Mean over runs of each run's convergent error, with its 2-sigma half-width.
///
/// A run that never plateaus contributes its tail mean instead.
pub fn convergent_error(cell: &CellResult) -> Option<(f64, f64, bool)> {
    let ratio = cell.nmse_ratio.unwrap_or(1.0);
    let mut all = true;
    let values: Vec<f64> = cell
        .runs
        .iter()
        .map(|r| match r.convergence {
            Some(c) => Some(c.value),
            None => {
                all = false;
                plateau_estimate(&r.mse_pi).map(|v| v * ratio)
            }
        })
        .collect::<Option<_>>()?;
    if values.is_empty() {
        return None;
    }
    Some((mean(&values), ci2sigma(&values), all))
}

pub fn level_rows(results: &ResultsDocument) -> Vec<LevelRow> {
    ok_cells(results)
        .filter_map(|cell| {
            let Levels::Discrete(levels) = cell.levels else { return None };
            let (e, ci, all) = convergent_error(cell)?;
            Some(LevelRow {
                image: cell.image.clone(),
                resolution: cell.resolution,
                variant: cell.variant.label(),
                start: cell.start.to_string(),
                levels,
                log2_levels: f64::from(levels).log2(),
                convergent_error: e,
                log2_error: e.log2(),
                ci2sigma: ci,
                all_converged: all,
            })
        })
        .collect()
}

pub fn level_fit_rows(rows: &[LevelRow]) -> Vec<LevelFitRow> {
    let mut keys: Vec<(String, usize, String, String)> = rows
        .iter()
        .map(|r| (r.image.clone(), r.resolution, r.variant.clone(), r.start.clone()))
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|(image, resolution, variant, start)| {
            let points: Vec<(u32, f64)> = rows
                .iter()
                .filter(|r| r.image == image && r.resolution == resolution && r.variant == variant && r.start == start)
                .map(|r| (r.levels, r.convergent_error))
                .collect();
            let fit = fit_level_sweep(&points).ok()?;
            Some(LevelFitRow {
                image,
                resolution,
                variant,
                start,
                slope: fit.slope,
                intercept: fit.intercept,
                r_squared: fit.r_squared,
                points: fit.points,
                binary_included: fit.binary_included,
                binary_residual: fit.binary_residual,
            })
        })
        .collect()
}

pub fn time_rows(results: &ResultsDocument) -> Vec<TimeRow> {
    ok_cells(results)
        .filter_map(|cell| {
            let timing = cell.timing.as_ref()?;
            let n = 2 * cell.resolution;
            Some(TimeRow {
                image: cell.image.clone(),
                levels: cell.levels.to_string(),
                variant: cell.variant.label(),
                start: cell.start.to_string(),
                resolution: cell.resolution,
                hologram_size: n,
                size_term: size_term(n, n),
                mean_iteration_ms: timing.mean_iteration_ms,
                ci2sigma_ms: timing.ci2sigma_ms,
            })
        })
        .collect()
}

fn write_table<T: Serialize>(dir: &Path, name: &str, rows: &[T]) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut writer = csv::Writer::from_path(&path)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| HoloError::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(u32, f64)> = [2u32, 4, 8, 16, 32, 64].iter().map(|&l| (l, 0.5 * f64::from(l).powf(-1.5))).collect();
        let fit = fit_level_sweep(&pts).unwrap();
        assert!((fit.slope + 1.5).abs() < 1e-12);
        assert!((fit.intercept + 1.0).abs() < 1e-12);
        assert!(fit.binary_included);
        assert_eq!(fit.points, 6);
    }

    #[test]
    fn binary_outlier_is_dropped() {
        let mut pts: Vec<(u32, f64)> = [2u32, 4, 8, 16, 32, 64].iter().map(|&l| (l, f64::from(l).powi(-2))).collect();
        pts[0].1 = 0.1;
        let fit = fit_level_sweep(&pts).unwrap();
        assert!(!fit.binary_included);
        assert_eq!(fit.points, 5);
        assert!((fit.slope + 2.0).abs() < 1e-12);
        // 0.1 against the extrapolated 0.25
        assert!((fit.binary_residual.unwrap() - (0.1f64.log2() - 0.25f64.log2())).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        assert!(fit_level_sweep(&[(4, 0.1)]).is_err());
    }
}
