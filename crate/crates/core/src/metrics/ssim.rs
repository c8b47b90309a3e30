use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};

/// Stabilising constants `c1 = (k1 L)^2`, `c2 = (k2 L)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsimParams {
    pub k1: f64,
    pub k2: f64,
    /// Dynamic range of the pixel values.
    pub dynamic_range: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        SsimParams {
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 1.0,
        }
    }
}

/// Global (single window) structural similarity between two equally sized images.
pub fn ssim(target: &[f64], replay: &[f64], params: SsimParams) -> Result<f64> {
    if target.len() != replay.len() || target.is_empty() {
        return Err(HoloError::DimensionMismatch {
            left: (target.len(), 1),
            right: (replay.len(), 1),
        });
    }
    let n = target.len() as f64;
    let (mut st, mut sr, mut stt, mut srr, mut str_) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&t, &r) in target.iter().zip(replay) {
        st += t;
        sr += r;
        stt += t * t;
        srr += r * r;
        str_ += t * r;
    }
    let mu_t = st / n;
    let mu_r = sr / n;
    let var_t = (stt / n - mu_t * mu_t).max(0.0);
    let var_r = (srr / n - mu_r * mu_r).max(0.0);
    let cov = str_ / n - mu_t * mu_r;

    let c1 = (params.k1 * params.dynamic_range).powi(2);
    let c2 = (params.k2 * params.dynamic_range).powi(2);
    Ok((2.0 * mu_t * mu_r + c1) * (2.0 * cov + c2)
        / ((mu_t * mu_t + mu_r * mu_r + c1) * (var_t + var_r + c2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // two-pass evaluation straight from the formula
    fn oracle(t: &[f64], r: &[f64], k1: f64, k2: f64, l: f64) -> f64 {
        let n = t.len() as f64;
        let mt = t.iter().sum::<f64>() / n;
        let mr = r.iter().sum::<f64>() / n;
        let vt = t.iter().map(|x| (x - mt).powi(2)).sum::<f64>() / n;
        let vr = r.iter().map(|x| (x - mr).powi(2)).sum::<f64>() / n;
        let cv = t.iter().zip(r).map(|(a, b)| (a - mt) * (b - mr)).sum::<f64>() / n;
        let c1 = (k1 * l).powi(2);
        let c2 = (k2 * l).powi(2);
        (2.0 * mt * mr + c1) * (2.0 * cv + c2) / ((mt * mt + mr * mr + c1) * (vt + vr + c2))
    }

    #[test]
    fn identical_images_score_one() {
        let t: Vec<f64> = (0..64).map(|i| (i % 7) as f64 / 7.0).collect();
        assert!((ssim(&t, &t, SsimParams::default()).unwrap() - 1.0).abs() < 1e-12);
        let flat = vec![0.4; 16];
        assert!((ssim(&flat, &flat, SsimParams::default()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn offset_image_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let t: Vec<f64> = (0..64).map(|_| rng.random::<f64>()).collect();
        let r: Vec<f64> = t.iter().map(|v| v + 0.1).collect();
        let got = ssim(&t, &r, SsimParams::default()).unwrap();
        let want = oracle(&t, &r, 0.01, 0.03, 1.0);
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        assert!(got < 1.0);
    }

    #[test]
    fn symmetric_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let t: Vec<f64> = (0..30).map(|_| rng.random::<f64>()).collect();
            let r: Vec<f64> = (0..30).map(|_| rng.random::<f64>()).collect();
            let a = ssim(&t, &r, SsimParams::default()).unwrap();
            let b = ssim(&r, &t, SsimParams::default()).unwrap();
            assert!((a - b).abs() < 1e-14);
            assert!((-1.0..=1.0).contains(&a));
            assert!((a - oracle(&t, &r, 0.01, 0.03, 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn mismatch_rejected() {
        assert!(ssim(&[1.0], &[1.0, 2.0], SsimParams::default()).is_err());
    }
}
