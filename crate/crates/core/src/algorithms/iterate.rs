use std::hash::{DefaultHasher, Hasher};
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{start_back_projection, start_random, AlgorithmConfig, StartKind, Variant};
use crate::error::{HoloError, Result};
use crate::field::{ComplexField, EmbeddedTarget, Propagator};
use crate::modulation::Quantiser;

/// One row of the trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// Phase-insensitive MSE of the hologram entering this iteration.
    pub mse_pi: f64,
    /// Wall time of the iteration in milliseconds.
    pub wall_ms: f64,
    /// Hash of the hologram leaving this iteration.
    pub hologram_hash: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
    pub final_hologram: ComplexField,
}

impl IterationTrace {
    pub fn mse_pi(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.mse_pi).collect()
    }

    pub fn hashes(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.hologram_hash).collect()
    }

    pub fn mean_wall_ms(&self) -> f64 {
        self.records.iter().map(|r| r.wall_ms).sum::<f64>() / self.records.len().max(1) as f64
    }

    pub fn total_wall_ms(&self) -> f64 {
        self.records.iter().map(|r| r.wall_ms).sum()
    }
}

/// What an observer sees once per iteration, before the replay constraint is applied.
#[derive(Debug)]
pub struct IterationStep<'a> {
    /// 1-based iteration number.
    pub iteration: usize,
    pub hologram: &'a ComplexField,
    pub replay: &'a ComplexField,
    pub mse_pi: f64,
}

/// Hash of the exact bit pattern of a field.
pub fn hologram_hash(field: &ComplexField) -> u64 {
    let mut h = DefaultHasher::new();
    h.write_usize(field.width());
    h.write_usize(field.height());
    for v in field.as_slice() {
        h.write_u64(v.re.to_bits());
        h.write_u64(v.im.to_bits());
    }
    h.finish()
}

pub fn run(config: &AlgorithmConfig, target: &EmbeddedTarget) -> Result<IterationTrace> {
    run_observed(config, target, |_| {})
}

/// Runs the loop, calling `observe` on every iteration.
pub fn run_observed(
    config: &AlgorithmConfig,
    target: &EmbeddedTarget,
    mut observe: impl FnMut(&IterationStep<'_>),
) -> Result<IterationTrace> {
    let (width, height) = target.dims();
    config.validate(width, height)?;
    let region = target.region();
    if !region.fits_within(width, height) {
        return Err(HoloError::DimensionMismatch {
            left: (region.x1, region.y1),
            right: (width, height),
        });
    }
    let quantiser = Quantiser::new(&config.scheme)?;
    let mut hologram = match config.start {
        StartKind::Random => start_random(&config.scheme, width, height, config.rng_seed)?,
        StartKind::BackProjection => start_back_projection(target.field(), &config.scheme)?,
    };
    let amplitude = target.amplitude();
    let target_energy = target.energy();
    let region_indices: Vec<usize> = region.indices(width).collect();
    let mut in_region = vec![false; width * height];
    region_indices.iter().for_each(|&i| in_region[i] = true);

    let mut propagator = Propagator::new(width, height);
    let mut replay = hologram.clone();
    let mut records = Vec::with_capacity(config.max_iterations);

    for iteration in 1..=config.max_iterations {
        let started = Instant::now();
        replay.as_mut_slice().copy_from_slice(hologram.as_slice());
        propagator.forward(&mut replay);

        // energy match between replay and target inside the region
        let data = replay.as_mut_slice();
        let region_energy: f64 = region_indices.iter().map(|&i| data[i].norm_sqr()).sum();
        let scale = if region_energy > 0.0 && target_energy > 0.0 {
            (region_energy / target_energy).sqrt()
        } else {
            1.0
        };
        let mse_pi = region_indices
            .iter()
            .zip(amplitude)
            .map(|(&i, &a)| {
                let d = a - data[i].norm() / scale;
                d * d
            })
            .sum::<f64>()
            / region_indices.len() as f64;

        observe(&IterationStep {
            iteration,
            hologram: &hologram,
            replay: &replay,
            mse_pi,
        });

        let data = replay.as_mut_slice();
        for (&i, &a) in region_indices.iter().zip(amplitude) {
            let r = data[i].norm();
            data[i] = if r > 0.0 {
                data[i] * (scale * a / r)
            } else {
                Complex64::new(scale * a, 0.0)
            };
        }
        if !config.free_outside_target {
            for (v, inside) in data.iter_mut().zip(&in_region) {
                if !inside {
                    *v = Complex64::new(0.0, 0.0);
                }
            }
        }
        propagator.inverse(&mut replay);
        apply_quantiser(&config.variant, &quantiser, &replay, &mut hologram);

        records.push(IterationRecord {
            mse_pi,
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
            hologram_hash: hologram_hash(&hologram),
        });
    }

    Ok(IterationTrace {
        records,
        final_hologram: hologram,
    })
}

fn apply_quantiser(variant: &Variant, q: &Quantiser, field: &ComplexField, out: &mut ComplexField) {
    let width = field.width();
    let src = field.as_slice();
    let dst = out.as_mut_slice();
    match variant {
        Variant::Gs | Variant::Lt { window: None } => {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = q.project(s);
            }
        }
        Variant::Wgs { beta } if *beta == 1.0 => {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = q.project(s);
            }
        }
        Variant::Wgs { beta } => {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = s + *beta * (q.project(s) - s);
            }
        }
        Variant::Lt { window: Some(w) } => {
            dst.copy_from_slice(src);
            for i in w.indices(width) {
                dst[i] = q.project(src[i]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{embed_target, fft2_centered, Direction, RealImage, Rect};
    use crate::modulation::{quantise_weighted, quantise_windowed, ModulationScheme};

    fn target(n: usize) -> EmbeddedTarget {
        let img = RealImage::from_fn(n, n, |x, y| {
            let r = ((x as f64 - n as f64 / 2.0).powi(2) + (y as f64 - n as f64 / 2.0).powi(2)).sqrt();
            0.5 + 0.5 * (r / 2.0).cos()
        })
        .unwrap();
        embed_target(&img).unwrap()
    }

    #[test]
    fn trace_shape_and_timing() {
        let t = target(8);
        let cfg = AlgorithmConfig::gs(ModulationScheme::phase(8).unwrap(), 5, 1);
        let trace = run(&cfg, &t).unwrap();
        assert_eq!(trace.records.len(), 5);
        assert!(trace.records.iter().all(|r| r.wall_ms > 0.0 && r.mse_pi >= 0.0));
        assert_eq!(trace.final_hologram.dims(), (16, 16));
        assert_eq!(trace.records.last().unwrap().hologram_hash, hologram_hash(&trace.final_hologram));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let t = target(8);
        let cfg = AlgorithmConfig::gs(ModulationScheme::phase(16).unwrap(), 6, 9);
        let a = run(&cfg, &t).unwrap();
        let b = run(&cfg, &t).unwrap();
        assert_eq!(a.mse_pi(), b.mse_pi());
        assert_eq!(a.hashes(), b.hashes());
        assert_eq!(a.final_hologram, b.final_hologram);
    }

    #[test]
    fn variant_reductions_are_bit_identical() {
        let t = target(8);
        let scheme = ModulationScheme::phase(4).unwrap();
        let gs = run(&AlgorithmConfig::gs(scheme, 8, 5), &t).unwrap();
        for variant in [Variant::Wgs { beta: 1.0 }, Variant::Lt { window: None }, Variant::Lt { window: Some(Rect::full(16, 16)) }] {
            let mut cfg = AlgorithmConfig::gs(scheme, 8, 5);
            cfg.variant = variant;
            let other = run(&cfg, &t).unwrap();
            assert_eq!(other.hashes(), gs.hashes(), "{variant:?}");
            assert_eq!(other.mse_pi(), gs.mse_pi());
        }
    }

    #[test]
    fn hologram_constraint_per_variant() {
        let t = target(8);
        let scheme = ModulationScheme::phase(4).unwrap();
        let q = Quantiser::new(&scheme).unwrap();

        let gs = run(&AlgorithmConfig::gs(scheme, 4, 2), &t).unwrap();
        assert!(gs.final_hologram.as_slice().iter().all(|&v| q.contains(v)));

        let window = Rect::new(0, 0, 16, 8);
        let mut cfg = AlgorithmConfig::gs(scheme, 4, 2);
        cfg.variant = Variant::Lt { window: Some(window) };
        let lt = run(&cfg, &t).unwrap();
        for y in 0..16 {
            for x in 0..16 {
                let v = lt.final_hologram.get(x, y);
                if window.contains(x, y) {
                    assert!(q.contains(v));
                }
            }
        }
        assert!(lt.final_hologram.as_slice().iter().any(|&v| !q.contains(v)));

        cfg.variant = Variant::Wgs { beta: 0.6 };
        let wgs = run(&cfg, &t).unwrap();
        assert!(wgs.final_hologram.as_slice().iter().any(|&v| !q.contains(v)));
    }

    #[test]
    fn loop_quantisers_match_public_quantisers() {
        let scheme = ModulationScheme::phase(6).unwrap();
        let q = Quantiser::new(&scheme).unwrap();
        let field = crate::algorithms::random_phase_field(8, 8, 3).unwrap().map(|v| v * 0.7);
        let mut out = field.clone();
        apply_quantiser(&Variant::Wgs { beta: 0.4 }, &q, &field, &mut out);
        let expected = quantise_weighted(&field, &scheme, 0.4).unwrap();
        for (a, b) in out.as_slice().iter().zip(expected.as_slice()) {
            assert!((a - b).norm() < 1e-15);
        }
        let w = Rect::new(2, 2, 6, 5);
        apply_quantiser(&Variant::Lt { window: Some(w) }, &q, &field, &mut out);
        assert_eq!(out, quantise_windowed(&field, &scheme, &w).unwrap());
    }

    #[test]
    fn observer_sees_every_iteration() {
        let t = target(4);
        let cfg = AlgorithmConfig::gs(ModulationScheme::phase(2).unwrap(), 7, 3);
        let mut seen = Vec::new();
        let trace = run_observed(&cfg, &t, |step| {
            let direct = fft2_centered(step.hologram, Direction::Forward);
            for (a, b) in direct.as_slice().iter().zip(step.replay.as_slice()) {
                assert!((a - b).norm() < 1e-9);
            }
            seen.push((step.iteration, step.mse_pi));
        })
        .unwrap();
        assert_eq!(seen.len(), 7);
        assert_eq!(seen.iter().map(|s| s.1).collect::<Vec<_>>(), trace.mse_pi());
    }

    #[test]
    fn window_larger_than_target_rejected() {
        let t = target(4);
        let mut cfg = AlgorithmConfig::gs(ModulationScheme::phase(2).unwrap(), 2, 3);
        cfg.variant = Variant::Lt { window: Some(Rect::new(0, 0, 9, 8)) };
        assert!(matches!(run(&cfg, &t), Err(HoloError::DimensionMismatch { .. })));
    }

    #[test]
    fn free_outside_flag_changes_result() {
        let t = target(8);
        let mut cfg = AlgorithmConfig::gs(ModulationScheme::phase(8).unwrap(), 5, 1);
        let forced = run(&cfg, &t).unwrap();
        cfg.free_outside_target = true;
        let free = run(&cfg, &t).unwrap();
        assert_eq!(free.records[0].mse_pi, forced.records[0].mse_pi);
        assert_ne!(free.hashes(), forced.hashes());
    }
}
