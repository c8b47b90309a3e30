//! One GS run on the bundled photograph, with the error curve and plateau.
//!
//! `cargo run --release --example gerchberg_saxton [levels] [iterations]`

use holobench::algorithms::{run, AlgorithmConfig};
use holobench::field::embed_target;
use holobench::harness::resolve_image;
use holobench::metrics::{detect_convergence, detect_cycle, DEFAULT_EPSILON};
use holobench::modulation::{Levels, ModulationKind, ModulationScheme};

fn main() -> holobench::Result<()> {
    let mut args = std::env::args().skip(1);
    let levels: Levels = args.next().as_deref().unwrap_or("256").parse()?;
    let iterations: usize = args.next().map_or(30, |s| s.parse().expect("iteration count"));

    let image = resolve_image(concat!(env!("CARGO_MANIFEST_DIR"), "/data/camera.png"), 128)?;
    let target = embed_target(&image)?;
    let scheme = ModulationScheme::new(ModulationKind::Phase, levels)?;
    let trace = run(&AlgorithmConfig::gs(scheme, iterations, 42), &target)?;

    let mse = trace.mse_pi();
    for (i, e) in mse.iter().enumerate().filter(|(i, _)| i % 5 == 0 || *i + 1 == mse.len()) {
        println!("iteration {:>3}  mse_pi {e:.6e}", i + 1);
    }
    match detect_convergence(&mse, DEFAULT_EPSILON) {
        Some(c) => println!("plateau at n = {} with L = {:.6e}", c.index, c.value),
        None => println!("no plateau within {iterations} iterations"),
    }
    if let Some(c) = detect_cycle(&trace.hashes()) {
        println!("hologram repeats with period {} from iteration {}", c.period, c.onset + 1);
    }
    println!("mean iteration time {:.2} ms", trace.mean_wall_ms());
    Ok(())
}
