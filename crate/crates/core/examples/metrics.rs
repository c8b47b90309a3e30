//! Error metrics on a replay field, plus NMSE normalization between images.

use holobench::algorithms::{run_observed, AlgorithmConfig};
use holobench::field::{embed_target, ComplexField};
use holobench::harness::resolve_image;
use holobench::metrics::{nmse, MetricReport, NormalizationTable};
use holobench::modulation::ModulationScheme;

fn main() -> holobench::Result<()> {
    let mut horizon = Vec::new();
    for id in ["synthetic:gradient", "synthetic:noise"] {
        let target = embed_target(&resolve_image(id, 64)?)?;
        let mut last = None;
        let config = AlgorithmConfig::gs(ModulationScheme::phase(16)?, 20, 1);
        let trace = run_observed(&config, &target, |step| last = Some(step.replay.clone()))?;
        let replay = last.expect("at least one iteration");

        // compare amplitudes in the target region, replay rescaled to the target energy
        let region = target.region();
        let t = target.field().extract(&region);
        let mut r = replay.extract(&region);
        let scale = (t.iter().map(|v| v.norm_sqr()).sum::<f64>() / r.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt();
        r.iter_mut().for_each(|v| *v *= scale);
        let (w, h) = (region.width(), region.height());
        let report = MetricReport::between(&ComplexField::new(w, h, t)?, &ComplexField::new(w, h, r)?)?;
        println!("{id}: mse_pi {:.4e}  mse_ps {:.4e}  ssim {:.4}", report.mse_pi, report.mse_ps, report.ssim);
        horizon.push((id.to_string(), *trace.mse_pi().last().unwrap()));
    }
    let table = NormalizationTable::from_horizon_mse("synthetic:gradient", horizon.clone())?;
    for (id, mse) in &horizon {
        println!("{id}: loop mse {mse:.4e} -> nmse {:.4e} (ratio {:.3})", nmse(*mse, id, &table)?, table.ratio(id).unwrap());
    }
    Ok(())
}
