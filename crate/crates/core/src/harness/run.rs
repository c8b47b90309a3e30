use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::export::{CellResult, CycleReport, Environment, ResultsDocument, RunSummary, TimingSummary};
use super::images::resolve_image;
use super::plan::{CellSpec, ExperimentPlan};
use super::stats::{ci2sigma, mean, Curves};
use crate::algorithms::run;
use crate::error::{HoloError, Result};
use crate::field::{embed_target, EmbeddedTarget};
use crate::metrics::{detect_convergence, detect_cycle, NormalizationTable};
use crate::modulation::ModulationScheme;

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker cap; the rayon default when unset. Ignored for serial plans.
    pub threads: Option<usize>,
}

/// Reported once per finished run, from worker threads.
#[derive(Debug, Clone, Copy)]
pub struct Progress {
    pub completed: usize,
    pub total: usize,
    pub cell: usize,
    pub seed: u64,
}

pub fn run_plan(plan: &ExperimentPlan) -> Result<ResultsDocument> {
    run_plan_with(plan, RunOptions::default(), &|_| {})
}

/// Runs every (cell, seed) job in a worker pool and aggregates per cell.
///
/// Failures are confined to their cell: the cell records the first error and
/// carries no aggregates, and the rest of the plan proceeds.
pub fn run_plan_with(plan: &ExperimentPlan, options: RunOptions, progress: &(dyn Fn(Progress) + Sync)) -> Result<ResultsDocument> {
    plan.validate()?;
    let cells = plan.cells();
    let seeds = plan.seeds();
    let threads = if plan.serial { 1 } else { options.threads.unwrap_or_else(rayon::current_num_threads).max(1) };

    let mut targets: HashMap<(String, usize), std::result::Result<EmbeddedTarget, String>> = HashMap::new();
    for cell in &cells {
        targets
            .entry((cell.image.clone(), cell.resolution))
            .or_insert_with(|| load_target(&cell.image, cell.resolution).map_err(|e| e.to_string()));
    }
    let mut setup_errors: Vec<Option<String>> = cells
        .iter()
        .map(|cell| match &targets[&(cell.image.clone(), cell.resolution)] {
            Err(e) => Some(e.clone()),
            Ok(target) => {
                let (w, h) = target.dims();
                plan.algorithm_config(cell, 0).validate(w, h).err().map(|e| e.to_string())
            }
        })
        .collect();

    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .filter(|&c| setup_errors[c].is_none())
        .flat_map(|c| (0..seeds.len()).map(move |r| (c, r)))
        .collect();
    let total = jobs.len();
    let completed = std::sync::atomic::AtomicUsize::new(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HoloError::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<std::result::Result<RunSummary, String>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(c, r)| {
                let cell = &cells[c];
                let target = targets[&(cell.image.clone(), cell.resolution)].as_ref().expect("setup checked");
                let outcome = run_one(plan, cell, target, seeds[r]).map_err(|e| e.to_string());
                let done = completed.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                progress(Progress { completed: done, total, cell: c, seed: seeds[r] });
                outcome
            })
            .collect()
    });

    let mut per_cell: Vec<Vec<RunSummary>> = vec![Vec::new(); cells.len()];
    for (&(c, _), outcome) in jobs.iter().zip(outcomes) {
        match outcome {
            Ok(summary) if setup_errors[c].is_none() => per_cell[c].push(summary),
            Ok(_) => {}
            Err(e) => {
                setup_errors[c].get_or_insert(e);
            }
        }
    }

    let horizon = plan.effective_nmse_horizon();
    let mse_curves: Vec<Option<Curves>> = per_cell
        .iter()
        .zip(&setup_errors)
        .map(|(runs, err)| {
            err.is_none().then(|| Curves::from_runs(&runs.iter().map(|r| r.mse_pi.clone()).collect::<Vec<_>>()))
        })
        .collect();
    let ratios = normalizers(plan, &cells, &mse_curves, horizon);

    let results = cells
        .iter()
        .enumerate()
        .map(|(c, cell)| {
            let mut runs = std::mem::take(&mut per_cell[c]);
            if let Some(e) = &setup_errors[c] {
                return failed_cell(cell, &seeds, e.clone());
            }
            let ratio = ratios[c];
            for r in &mut runs {
                let series: Vec<f64> = match ratio {
                    Some(k) => r.mse_pi.iter().map(|v| v * k).collect(),
                    None => r.mse_pi.clone(),
                };
                r.convergence = detect_convergence(&series, plan.epsilon);
            }
            let mse = mse_curves[c].clone().expect("successful cell has curves");
            let curves = ratio.map(|k| mse.scaled(k));
            let basis = curves.as_ref().unwrap_or(&mse);
            let per_iteration: Vec<f64> = runs.iter().map(|r| r.mean_iteration_ms).collect();
            CellResult {
                image: cell.image.clone(),
                resolution: cell.resolution,
                kind: cell.scheme.kind,
                levels: cell.scheme.levels,
                variant: cell.variant,
                start: cell.start,
                seeds: seeds.clone(),
                error: None,
                nmse_ratio: ratio,
                convergence: detect_convergence(&basis.mean, plan.epsilon),
                cycle: Some(CycleReport::from_runs(&runs)),
                timing: Some(TimingSummary {
                    mean_iteration_ms: mean(&per_iteration),
                    ci2sigma_ms: ci2sigma(&per_iteration),
                    total_ms: runs.iter().map(|r| r.mean_iteration_ms * r.mse_pi.len() as f64).sum(),
                }),
                curves,
                mse_curves: Some(mse),
                runs,
            }
        })
        .collect();

    Ok(ResultsDocument {
        plan: plan.clone(),
        environment: environment(plan, threads),
        cells: results,
    })
}

fn load_target(image: &str, resolution: usize) -> Result<EmbeddedTarget> {
    embed_target(&resolve_image(image, resolution)?)
}

fn run_one(plan: &ExperimentPlan, cell: &CellSpec, target: &EmbeddedTarget, seed: u64) -> Result<RunSummary> {
    let trace = run(&plan.algorithm_config(cell, seed), target)?;
    let mse_pi = trace.mse_pi();
    let cycle = detect_cycle(&trace.hashes());
    Ok(RunSummary {
        seed,
        cycle_mse_variation: cycle.map(|c| cycle_variation(&mse_pi, c.period)),
        convergence: None,
        cycle,
        mean_iteration_ms: trace.mean_wall_ms(),
        final_hash: trace.records.last().map_or(0, |r| r.hologram_hash),
        mse_pi,
    })
}

/// Relative spread of the error over the final `period` iterations.
pub(crate) fn cycle_variation(mse: &[f64], period: usize) -> f64 {
    let tail = &mse[mse.len().saturating_sub(period)..];
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let m = mean(tail);
    if m > 0.0 {
        (hi - lo) / m
    } else {
        0.0
    }
}

/// One normalization table per (resolution, scheme, start, variant) group.
fn normalizers(plan: &ExperimentPlan, cells: &[CellSpec], curves: &[Option<Curves>], horizon: usize) -> Vec<Option<f64>> {
    let group_key = |cell: &CellSpec| (cell.resolution, cell.scheme, cell.start, cell.variant.label());
    let mut groups: BTreeMap<String, Vec<(usize, f64)>> = BTreeMap::new();
    for (c, (cell, curve)) in cells.iter().zip(curves).enumerate() {
        if let Some(curve) = curve {
            groups.entry(format!("{:?}", group_key(cell))).or_default().push((c, curve.mean[horizon - 1]));
        }
    }
    let mut ratios = vec![None; cells.len()];
    for members in groups.values() {
        let table = NormalizationTable::from_horizon_mse(
            plan.reference(),
            members.iter().map(|&(c, mse)| (cells[c].image.clone(), mse)),
        );
        if let Ok(table) = table {
            for &(c, _) in members {
                ratios[c] = table.ratio(&cells[c].image);
            }
        }
    }
    ratios
}

fn failed_cell(cell: &CellSpec, seeds: &[u64], error: String) -> CellResult {
    CellResult {
        image: cell.image.clone(),
        resolution: cell.resolution,
        kind: cell.scheme.kind,
        levels: cell.scheme.levels,
        variant: cell.variant,
        start: cell.start,
        seeds: seeds.to_vec(),
        error: Some(error),
        nmse_ratio: None,
        curves: None,
        mse_curves: None,
        convergence: None,
        cycle: None,
        timing: None,
        runs: Vec::new(),
    }
}

fn environment(plan: &ExperimentPlan, threads: usize) -> Environment {
    Environment {
        machine: plan.environment.machine.clone().unwrap_or_else(|| "unlabelled".into()),
        precision: plan.environment.precision.clone().unwrap_or_else(|| "double".into()),
        os: std::env::consts::OS.into(),
        arch: std::env::consts::ARCH.into(),
        threads,
        version: env!("CARGO_PKG_VERSION").into(),
        nmse_reference: plan.reference().into(),
        nmse_horizon: plan.effective_nmse_horizon(),
        epsilon: plan.epsilon,
    }
}

/// Re-runs a recorded cell from its seeds and returns the MSE curve of each run.
pub fn reproduce_cell(plan: &ExperimentPlan, cell: &CellResult) -> Result<Vec<Vec<f64>>> {
    let spec = CellSpec {
        image: cell.image.clone(),
        resolution: cell.resolution,
        scheme: ModulationScheme::new(cell.kind, cell.levels)?,
        start: cell.start,
        variant: cell.variant,
    };
    let target = load_target(&spec.image, spec.resolution)?;
    cell.seeds
        .iter()
        .map(|&seed| Ok(run(&plan.algorithm_config(&spec, seed), &target)?.mse_pi()))
        .collect()
}
