//! Experiment harness: images, plans, runs, statistics and exports.

mod export;
mod images;
mod plan;
pub mod plot;
mod run;
pub mod runtime;
mod sampling;
mod stats;

pub use export::{export_results, import_results, CellResult, CycleReport, Environment, ResultsDocument, RunSummary, TimingSummary};
pub use images::{load_image, resolve_image, synthetic_image, SyntheticKind};
pub use plan::{CellSpec, EnvironmentLabels, ExperimentPlan};
pub use run::{reproduce_cell, run_plan, run_plan_with, Progress, RunOptions};
pub use sampling::{is_smooth_size, next_smooth_size, smooth_sizes_between};
pub use stats::{ci2sigma, linear_fit, mean, sample_std, Curves, LinearFit};
