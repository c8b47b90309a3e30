//! Command line front end for the `holo` binary.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 partial benchmark failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use image::{ImageBuffer, Luma};
use serde::{Deserialize, Serialize};

use crate::algorithms::{run, AlgorithmConfig, StartKind, Variant};
use crate::error::{HoloError, Result};
use crate::field::{embed_target, Rect};
use crate::harness::plot::emit_plot_data;
use crate::harness::runtime::{
    fit_runtime_model, measure_iteration_times, predict_runtime, Factors, RuntimeFit, RuntimeModel, TimingMeasurement,
};
use crate::harness::{
    export_results, import_results, resolve_image, run_plan_with, ExperimentPlan, Progress, RunOptions,
};
use crate::metrics::{detect_convergence, detect_cycle, Convergence, Cycle, DEFAULT_EPSILON};
use crate::modulation::{Levels, ModulationKind, ModulationScheme, Quantiser};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

/// Environment variable capping the benchmark worker count.
pub const THREADS_ENV: &str = "HOLO_THREADS";

#[derive(Debug, Parser)]
#[command(name = "holo", version, about = "Gerchberg-Saxton hologram generation and benchmarking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate one hologram and write it as a level-index raster.
    Generate(GenerateArgs),
    /// Run an experiment plan and write the results document.
    Bench(BenchArgs),
    /// Fit the runtime model to timing measurements.
    Fit(FitArgs),
    /// Predict run time from a runtime model.
    Predict(PredictArgs),
    /// Write the CSV plot tables for a results document.
    Plotdata(PlotdataArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Phase,
    Amplitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Gs,
    Wgs,
    Lt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartArg {
    Random,
    Backproject,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Image file, or `synthetic:<gradient|checkerboard|noise|rings>`.
    #[arg(long)]
    pub image: String,
    /// Target size; the hologram is twice as large in each dimension.
    #[arg(long, default_value_t = 128)]
    pub resolution: usize,
    #[arg(long, default_value = "256")]
    pub levels: Levels,
    #[arg(long, value_enum, default_value_t = KindArg::Phase)]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value_t = VariantArg::Gs)]
    pub variant: VariantArg,
    /// WGS weight, in (0, 2].
    #[arg(long)]
    pub beta: Option<f64>,
    /// LT window in hologram pixels, half-open.
    #[arg(long, value_name = "x0,y0,x1,y1", value_parser = parse_window)]
    pub window: Option<Rect>,
    #[arg(long, value_enum, default_value_t = StartArg::Random)]
    pub start: StartArg,
    #[arg(long, default_value_t = 30)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Leave the replay field outside the target unconstrained.
    #[arg(long)]
    pub free_outside: bool,
    /// Output PNG of level indices (8-bit, or 16-bit above 256 levels).
    #[arg(long)]
    pub out: PathBuf,
    /// Print the summary as one JSON object.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Experiment plan JSON.
    #[arg(long)]
    pub plan: PathBuf,
    /// Results JSON to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write plot tables into this directory.
    #[arg(long)]
    pub plots: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with columns nx,ny,iterations,total_ms.
    #[arg(long, conflicts_with_all = ["results", "measure"])]
    pub measurements: Option<PathBuf>,
    /// Results document whose cell timings are used.
    #[arg(long, conflicts_with = "measure")]
    pub results: Option<PathBuf>,
    /// Time GS on this machine at these hologram sizes.
    #[arg(long, value_delimiter = ',')]
    pub measure: Option<Vec<usize>>,
    /// Iterations per measured run.
    #[arg(long, default_value_t = 10)]
    pub iterations: usize,
    /// Measured runs per size.
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, default_value_t = 1.0)]
    pub machine: f64,
    #[arg(long, default_value_t = 1.0)]
    pub software: f64,
    #[arg(long, default_value_t = 1.0)]
    pub precision: f64,
    /// Write the fit as JSON here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Model JSON, either a bare model or a fit; the reference constants when absent.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub nx: usize,
    /// Defaults to `nx`.
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub iterations: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PlotdataArgs {
    #[arg(long)]
    pub results: PathBuf,
    /// Directory for the CSV tables.
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_window(s: &str) -> std::result::Result<Rect, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match parts[..] {
        [x0, y0, x1, y1] => Ok(Rect::new(x0, y0, x1, y1)),
        _ => Err(format!("expected x0,y0,x1,y1, got `{s}`")),
    }
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<HoloError> for CliError {
    fn from(e: HoloError) -> Self {
        let code = match e {
            HoloError::InvalidScheme(_)
            | HoloError::InvalidParameter(_)
            | HoloError::DegenerateWindow(_)
            | HoloError::DimensionMismatch { .. } => EXIT_USAGE,
            _ => EXIT_INPUT,
        };
        CliError { code, message: e.to_string() }
    }
}

/// Summary printed by `generate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateSummary {
    pub image: String,
    pub resolution: usize,
    pub hologram_size: usize,
    pub kind: ModulationKind,
    pub levels: Levels,
    #[serde(flatten)]
    pub variant: Variant,
    pub start: StartKind,
    pub iterations: usize,
    pub seed: u64,
    pub final_mse_pi: f64,
    pub convergence: Option<Convergence>,
    pub cycle: Option<Cycle>,
    pub out: PathBuf,
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    match execute(cli.command, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

/// Runs a parsed command, writing its report to `out`.
pub fn execute(command: Command, out: &mut dyn Write) -> std::result::Result<i32, CliError> {
    match command {
        Command::Generate(a) => cmd_generate(&a, out).map(|_| EXIT_OK),
        Command::Bench(a) => cmd_bench(&a),
        Command::Fit(a) => cmd_fit(&a, out).map(|_| EXIT_OK),
        Command::Predict(a) => cmd_predict(&a, out).map(|_| EXIT_OK),
        Command::Plotdata(a) => {
            let results = import_results(&a.results)?;
            for path in emit_plot_data(&results, &a.out)? {
                writeln!(out, "{}", path.display()).map_err(write_error)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn write_error(e: std::io::Error) -> CliError {
    CliError { code: EXIT_INPUT, message: format!("cannot write output: {e}") }
}

fn variant_from(a: &GenerateArgs) -> std::result::Result<Variant, CliError> {
    match a.variant {
        VariantArg::Gs => {
            if a.beta.is_some() || a.window.is_some() {
                return Err(CliError::usage("--beta and --window need --variant wgs or lt"));
            }
            Ok(Variant::Gs)
        }
        VariantArg::Wgs => {
            if a.window.is_some() {
                return Err(CliError::usage("--window needs --variant lt"));
            }
            let beta = a.beta.ok_or_else(|| CliError::usage("--variant wgs needs --beta"))?;
            Ok(Variant::Wgs { beta })
        }
        VariantArg::Lt => {
            if a.beta.is_some() {
                return Err(CliError::usage("--beta needs --variant wgs"));
            }
            Ok(Variant::Lt { window: a.window })
        }
    }
}

pub fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> std::result::Result<GenerateSummary, CliError> {
    let kind = match a.kind {
        KindArg::Phase => ModulationKind::Phase,
        KindArg::Amplitude => ModulationKind::Amplitude,
    };
    let scheme = ModulationScheme::new(kind, a.levels)?;
    if a.levels == Levels::Continuous {
        return Err(CliError::usage("a level-index raster needs a discrete --levels count"));
    }
    let start = match a.start {
        StartArg::Random => StartKind::Random,
        StartArg::Backproject => StartKind::BackProjection,
    };
    let variant = variant_from(a)?;
    if a.resolution < 2 || a.resolution % 2 != 0 {
        return Err(CliError::usage(format!("--resolution must be even and >= 2, got {}", a.resolution)));
    }
    let mut config = AlgorithmConfig::new(variant, scheme, start, a.iterations, a.seed);
    config.free_outside_target = a.free_outside;
    config.validate(2 * a.resolution, 2 * a.resolution)?;

    let target = embed_target(&resolve_image(&a.image, a.resolution)?)?;
    let trace = run(&config, &target)?;
    write_level_raster(&trace.final_hologram, &Quantiser::new(&scheme)?, &a.out)?;

    let mse = trace.mse_pi();
    let summary = GenerateSummary {
        image: a.image.clone(),
        resolution: a.resolution,
        hologram_size: 2 * a.resolution,
        kind,
        levels: a.levels,
        variant,
        start,
        iterations: a.iterations,
        seed: a.seed,
        final_mse_pi: *mse.last().expect("at least one iteration"),
        convergence: detect_convergence(&mse, DEFAULT_EPSILON),
        cycle: detect_cycle(&trace.hashes()),
        out: a.out.clone(),
    };
    if a.json {
        let text = serde_json::to_string(&summary).map_err(HoloError::from)?;
        writeln!(out, "{text}").map_err(write_error)?;
    } else {
        let converged = match summary.convergence {
            Some(c) => format!("iteration {} at {:.6e}", c.index, c.value),
            None => "not within the run".into(),
        };
        let cycle = match summary.cycle {
            Some(c) => format!("period {} from iteration {}", c.period, c.onset + 1),
            None => "none".into(),
        };
        writeln!(out, "hologram      {} ({}x{})", a.out.display(), summary.hologram_size, summary.hologram_size).map_err(write_error)?;
        writeln!(out, "final mse_pi  {:.6e}", summary.final_mse_pi).map_err(write_error)?;
        writeln!(out, "convergence   {converged}").map_err(write_error)?;
        writeln!(out, "cycle         {cycle}").map_err(write_error)?;
    }
    Ok(summary)
}

fn write_level_raster(hologram: &crate::field::ComplexField, q: &Quantiser, path: &Path) -> Result<()> {
    let (w, h) = (hologram.width() as u32, hologram.height() as u32);
    let index = |x: u32, y: u32| {
        let v = hologram.as_slice()[y as usize * hologram.width() + x as usize];
        q.level_index(v).expect("discrete scheme")
    };
    let image_error = |e: image::ImageError| HoloError::Image {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    if matches!(q.scheme().levels, Levels::Discrete(n) if n <= 256) {
        ImageBuffer::<Luma<u8>, _>::from_fn(w, h, |x, y| Luma([index(x, y) as u8])).save(path).map_err(image_error)
    } else {
        ImageBuffer::<Luma<u16>, _>::from_fn(w, h, |x, y| Luma([index(x, y) as u16])).save(path).map_err(image_error)
    }
}

fn threads_from_env() -> std::result::Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
    }
}

pub fn cmd_bench(a: &BenchArgs) -> std::result::Result<i32, CliError> {
    let threads = threads_from_env()?;
    let plan = ExperimentPlan::load(&a.plan)?;
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        if !parent.is_dir() {
            return Err(CliError { code: EXIT_INPUT, message: format!("output directory {} does not exist", parent.display()) });
        }
    }
    let progress = |p: Progress| eprintln!("[{}/{}] cell {} seed {}", p.completed, p.total, p.cell, p.seed);
    let results = run_plan_with(&plan, RunOptions { threads }, &progress)?;
    export_results(&results, &a.out)?;
    if let Some(dir) = &a.plots {
        if results.cells.iter().any(|c| !c.is_failed()) {
            emit_plot_data(&results, dir)?;
        }
    }
    let failed: Vec<_> = results.failed_cells().collect();
    for cell in &failed {
        eprintln!(
            "cell {} {} levels {} failed: {}",
            cell.image,
            cell.resolution,
            cell.levels,
            cell.error.as_deref().unwrap_or_default()
        );
    }
    eprintln!("wrote {} cells to {}", results.cells.len(), a.out.display());
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_PARTIAL })
}

fn read_measurements(path: &Path) -> Result<Vec<TimingMeasurement>> {
    let mut reader = csv::Reader::from_path(path)?;
    reader.deserialize().map(|row| row.map_err(HoloError::from)).collect()
}

pub fn cmd_fit(a: &FitArgs, out: &mut dyn Write) -> std::result::Result<RuntimeFit, CliError> {
    let measurements = if let Some(path) = &a.measurements {
        read_measurements(path)?
    } else if let Some(path) = &a.results {
        let results = import_results(path)?;
        results
            .cells
            .iter()
            .filter_map(|c| {
                let t = c.timing.as_ref()?;
                let n = 2 * c.resolution;
                let iterations = results.plan.iteration_horizon;
                Some(TimingMeasurement { nx: n, ny: n, iterations, total_ms: t.mean_iteration_ms * iterations as f64 })
            })
            .collect()
    } else if let Some(sizes) = &a.measure {
        let scheme = ModulationScheme::phase(256)?;
        measure_iteration_times(sizes, a.iterations.max(1), a.repeats.max(1), &scheme)?
    } else {
        return Err(CliError::usage("give one of --measurements, --results or --measure"));
    };
    let factors = Factors { machine: a.machine, software: a.software, precision: a.precision };
    let fit = fit_runtime_model(&measurements, factors)?;
    let text = serde_json::to_string_pretty(&fit).map_err(HoloError::from)?;
    match &a.out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| CliError::from(HoloError::io(path, e)))?,
        None => writeln!(out, "{text}").map_err(write_error)?,
    }
    Ok(fit)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ModelFile {
    Fit(RuntimeFit),
    Model(RuntimeModel),
}

pub fn cmd_predict(a: &PredictArgs, out: &mut dyn Write) -> std::result::Result<f64, CliError> {
    let model = match &a.model {
        None => RuntimeModel::reference(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| HoloError::io(path, e))?;
            match serde_json::from_str::<ModelFile>(&text).map_err(HoloError::from)? {
                ModelFile::Fit(f) => f.model,
                ModelFile::Model(m) => m,
            }
        }
    };
    model.validate()?;
    let ny = a.ny.unwrap_or(a.nx);
    if a.nx < 2 || ny < 2 {
        return Err(CliError::usage("--nx and --ny must be at least 2"));
    }
    let ms = predict_runtime(&model, a.nx, ny, a.iterations);
    if a.json {
        let value = serde_json::json!({ "nx": a.nx, "ny": ny, "iterations": a.iterations, "milliseconds": ms, "model": model });
        writeln!(out, "{value}").map_err(write_error)?;
    } else {
        writeln!(out, "{ms:.4} ms").map_err(write_error)?;
    }
    Ok(ms)
}
