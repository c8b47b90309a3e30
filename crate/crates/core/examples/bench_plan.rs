//! Run a plan file, write the results document and the plot tables.
//!
//! `cargo run --release --example bench_plan -- plans/quick.json out/`

use std::path::PathBuf;

use holobench::harness::plot::emit_plot_data;
use holobench::harness::{export_results, run_plan_with, ExperimentPlan, RunOptions};

fn main() -> holobench::Result<()> {
    let mut args = std::env::args().skip(1);
    let plan_path = PathBuf::from(args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/plans/quick.json").into()));
    let out = PathBuf::from(args.next().unwrap_or_else(|| "bench-out".into()));

    let plan = ExperimentPlan::load(&plan_path)?;
    let results = run_plan_with(&plan, RunOptions::default(), &|p| {
        if p.completed == p.total || p.completed % 10 == 0 {
            eprintln!("{}/{} runs", p.completed, p.total);
        }
    })?;
    std::fs::create_dir_all(&out).map_err(|source| holobench::HoloError::Io { path: out.display().to_string(), source })?;
    export_results(&results, out.join("results.json"))?;
    for path in emit_plot_data(&results, &out)? {
        println!("wrote {}", path.display());
    }
    for cell in &results.cells {
        let plateau = cell.convergence.map_or("-".into(), |c| format!("n={} L={:.4e}", c.index, c.value));
        println!("{} {} levels {} {}: {}", cell.image, cell.resolution, cell.levels, cell.variant.label(), plateau);
    }
    Ok(())
}
