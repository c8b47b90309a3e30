//! GS against weighted (WGS) and windowed (LT) quantisation on the same seed.

use holobench::algorithms::{run, AlgorithmConfig, StartKind, Variant};
use holobench::field::{embed_target, Rect};
use holobench::harness::{resolve_image, SyntheticKind};
use holobench::metrics::detect_convergence;
use holobench::modulation::ModulationScheme;

fn main() -> holobench::Result<()> {
    let n = 64;
    let target = embed_target(&resolve_image(&format!("synthetic:{}", SyntheticKind::Rings.name()), n)?)?;
    let scheme = ModulationScheme::phase(4)?;
    let variants = [
        Variant::Gs,
        Variant::Wgs { beta: 1.0 },
        Variant::Wgs { beta: 0.7 },
        Variant::Wgs { beta: 1.3 },
        Variant::Lt { window: Some(Rect::new(0, 0, n, n)) },
        Variant::Lt { window: Some(Rect::new(0, 0, 2 * n, n)) },
    ];
    let gs = run(&AlgorithmConfig::new(Variant::Gs, scheme, StartKind::Random, 40, 3), &target)?;
    for variant in variants {
        let trace = run(&AlgorithmConfig::new(variant, scheme, StartKind::Random, 40, 3), &target)?;
        let mse = trace.mse_pi();
        let plateau = detect_convergence(&mse, 1e-3).map_or("-".to_string(), |c| c.index.to_string());
        println!(
            "{:<16} final mse {:.5e}  plateau n {:>3}  identical to GS: {}",
            variant.label(),
            mse.last().unwrap(),
            plateau,
            trace.hashes() == gs.hashes()
        );
    }
    Ok(())
}
