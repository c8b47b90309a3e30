//! SLM constraint sets and the three quantisers.

use holobench::field::{ComplexField, Rect};
use holobench::modulation::{constraint_set, quantise_nn, quantise_weighted, quantise_windowed, ConstraintSet, ModulationScheme, Quantiser};
use num_complex::Complex64;

fn main() -> holobench::Result<()> {
    for scheme in [ModulationScheme::phase(2)?, ModulationScheme::phase(4)?, ModulationScheme::amplitude(4)?] {
        if let ConstraintSet::Discrete(values) = constraint_set(&scheme)? {
            let shown: Vec<String> = values.iter().map(|v| format!("{:.3}{:+.3}i", v.re, v.im)).collect();
            println!("{:?} {}: {}", scheme.kind, scheme.levels, shown.join(" "));
        }
    }

    let q = Quantiser::new(&ModulationScheme::phase(8)?)?;
    for v in [Complex64::new(0.9, 0.3), Complex64::new(-0.2, -2.0), Complex64::new(0.0, 0.0)] {
        println!("8-level phase: {v} -> index {:?}, value {:.4}", q.level_index(v), q.project(v));
    }

    let h = ComplexField::from_fn(4, 4, |x, y| Complex64::from_polar(0.5 + 0.1 * x as f64, 0.4 * y as f64))?;
    let scheme = ModulationScheme::phase(4)?;
    let (full, delta) = quantise_nn(&h, &scheme)?;
    let half = quantise_weighted(&h, &scheme, 0.5)?;
    let window = quantise_windowed(&h, &scheme, &Rect::new(0, 0, 2, 2))?;
    println!("pixel (3,3): input {:.3}", h.get(3, 3));
    println!("  nearest neighbour {:.3} (delta {:.3})", full.get(3, 3), delta.field().get(3, 3));
    println!("  weighted beta=0.5 {:.3}", half.get(3, 3));
    println!("  windowed outside W {:.3}, inside W {:.3}", window.get(3, 3), window.get(1, 1));
    Ok(())
}
