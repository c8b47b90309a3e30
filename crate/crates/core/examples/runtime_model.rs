//! Time GS on this machine, fit the runtime model and extrapolate.

use holobench::harness::runtime::{fit_runtime_model, fit_scaling, measure_iteration_times, predict_runtime, Factors, RuntimeModel};
use holobench::modulation::ModulationScheme;

fn main() -> holobench::Result<()> {
    let reference = RuntimeModel::reference();
    println!("reference model: 512x512, 1 iteration = {:.2} ms", predict_runtime(&reference, 512, 512, 1));

    let sizes = [128, 256, 512];
    let timings = measure_iteration_times(&sizes, 10, 3, &ModulationScheme::phase(256)?)?;
    let fit = fit_runtime_model(&timings, Factors::default())?;
    println!(
        "fitted on this machine: C_itr1 {:.4} ms, C_itr2 {:.4e} ms, R^2 {:.4}",
        fit.model.c_itr1, fit.model.c_itr2, fit.r_squared
    );
    for n in [1024, 2048] {
        println!("predicted {n}x{n}, 30 iterations: {:.0} ms", predict_runtime(&fit.model, n, n, 30));
    }
    let per_size: Vec<f64> = sizes
        .iter()
        .map(|&n| {
            let t: Vec<f64> = timings.iter().filter(|m| m.nx == n).map(|m| m.per_iteration_ms()).collect();
            t.iter().sum::<f64>() / t.len() as f64
        })
        .collect();
    let scaling = fit_scaling(&sizes, &per_size)?;
    println!("t = a + b N^2 log2(N)^2: a {:.3} ms, b {:.3e} ms, residual {:.2}% of variance", scaling.a, scaling.b, 100.0 * scaling.relative_mse());
    Ok(())
}
