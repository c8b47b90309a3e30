//! Binary phase holograms: point-symmetric replay fields and repeating states.

use holobench::algorithms::{run_observed, AlgorithmConfig};
use holobench::field::embed_target;
use holobench::harness::resolve_image;
use holobench::metrics::detect_cycle;
use holobench::modulation::ModulationScheme;

fn main() -> holobench::Result<()> {
    let target = embed_target(&resolve_image(concat!(env!("CARGO_MANIFEST_DIR"), "/data/camera.png"), 128)?)?;
    for seed in 0..5 {
        let mut asymmetry: f64 = 0.0;
        let config = AlgorithmConfig::gs(ModulationScheme::phase(2)?, 200, seed);
        let trace = run_observed(&config, &target, |step| {
            let r = step.replay;
            let (w, h) = r.dims();
            for y in 0..h {
                for x in 0..w {
                    let twin = r.get((w - x) % w, (h - y) % h).norm();
                    asymmetry = asymmetry.max((r.get(x, y).norm() - twin).abs());
                }
            }
        })?;
        let mse = trace.mse_pi();
        let cycle = detect_cycle(&trace.hashes());
        println!(
            "seed {seed}: final mse {:.5e}, max |R(x)| - |R(-x)| {asymmetry:.1e}, cycle {}",
            mse.last().unwrap(),
            cycle.map_or("none".into(), |c| format!("period {} from iteration {}", c.period, c.onset + 1))
        );
    }
    Ok(())
}
