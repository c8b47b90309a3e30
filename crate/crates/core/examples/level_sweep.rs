//! Convergent error against level count, with the log-log fit.

use holobench::harness::plot::{convergent_error, fit_level_sweep};
use holobench::harness::{run_plan, ExperimentPlan};
use holobench::modulation::Levels;

fn main() -> holobench::Result<()> {
    let counts = [2u32, 4, 8, 16, 32, 64, 256];
    let mut levels: Vec<Levels> = counts.iter().map(|&l| Levels::Discrete(l)).collect();
    levels.push(Levels::Continuous);
    let image = concat!(env!("CARGO_MANIFEST_DIR"), "/data/camera.png").to_string();
    let doc = run_plan(&ExperimentPlan::new(vec![image], vec![128], levels, 10, 30))?;

    let mut points = Vec::new();
    for cell in &doc.cells {
        let (e, ci, all) = convergent_error(cell).expect("successful cell");
        println!("{:>10} levels: convergent NMSE {e:.5e} +- {ci:.1e}{}", cell.levels, if all { "" } else { " (some runs not converged)" });
        if let Levels::Discrete(l) = cell.levels {
            if l <= 64 {
                points.push((l, e));
            }
        }
    }
    let fit = fit_level_sweep(&points)?;
    println!(
        "log2(error) = {:.3} + {:.3} log2(levels), R^2 {:.4}, binary included: {}",
        fit.intercept, fit.slope, fit.r_squared, fit.binary_included
    );
    Ok(())
}
