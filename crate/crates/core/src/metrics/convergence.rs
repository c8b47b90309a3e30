use serde::{Deserialize, Serialize};

pub const DEFAULT_EPSILON: f64 = 0.001;

/// Plateau found in an error series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    /// 1-based iteration number `n`.
    pub index: usize,
    /// Plateau value `L`.
    pub value: f64,
}

/// Estimate of the limit: mean of the last `max(4, len / 10)` values.
pub fn plateau_estimate(series: &[f64]) -> Option<f64> {
    if series.is_empty() {
        return None;
    }
    let tail = (series.len() / 10).max(4).min(series.len());
    let slice = &series[series.len() - tail..];
    Some(slice.iter().sum::<f64>() / tail as f64)
}

/// Smallest `n` such that `|x_t - L| < epsilon` for every `t` in `[n, 2n]`.
///
/// Iterations are numbered from 1, so the window needs `2n <= series.len()`.
/// Returns `None` when no such `n` exists within the series.
pub fn detect_convergence(series: &[f64], epsilon: f64) -> Option<Convergence> {
    let limit = plateau_estimate(series)?;
    let close: Vec<bool> = series.iter().map(|x| (x - limit).abs() < epsilon).collect();
    // run[i]: number of consecutive close values starting at 0-based index i
    let mut run = vec![0usize; close.len() + 1];
    for i in (0..close.len()).rev() {
        run[i] = if close[i] { run[i + 1] + 1 } else { 0 };
    }
    (1..=series.len() / 2)
        .find(|&n| run[n - 1] >= n + 1)
        .map(|index| Convergence {
            index,
            value: limit,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    // direct scan of the window condition, no run-length trick
    fn brute(series: &[f64], eps: f64) -> Option<usize> {
        let l = plateau_estimate(series)?;
        (1..=series.len()).find(|&n| 2 * n <= series.len() && (n..=2 * n).all(|t| (series[t - 1] - l).abs() < eps))
    }

    #[test]
    fn constant_series() {
        let c = detect_convergence(&[5.0, 5.0, 5.0, 5.0], DEFAULT_EPSILON).unwrap();
        assert_eq!(c.index, 1);
        assert_eq!(c.value, 5.0);
    }

    #[test]
    fn divergent_series() {
        let s: Vec<f64> = (1..=50).map(|t| t as f64).collect();
        assert!(detect_convergence(&s, DEFAULT_EPSILON).is_none());
    }

    #[test]
    fn geometric_approach() {
        let s: Vec<f64> = (1..=40).map(|t| 1.0 + 0.5f64.powi(t)).collect();
        let c = detect_convergence(&s, DEFAULT_EPSILON).unwrap();
        assert_eq!(Some(c.index), brute(&s, DEFAULT_EPSILON));
        // 0.5^10 ~ 9.8e-4 is the first term inside the band around a limit of ~1
        assert_eq!(c.index, 10);
        assert!((c.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn spike_after_window_is_ignored() {
        let mut s: Vec<f64> = (1..=60).map(|t| 0.2 + 0.5f64.powi(t)).collect();
        let clean = detect_convergence(&s, DEFAULT_EPSILON).unwrap();
        s[2 * clean.index + 3] += 0.5;
        let spiked = detect_convergence(&s, DEFAULT_EPSILON).unwrap();
        assert_eq!(spiked.index, clean.index);
    }

    #[test]
    fn matches_brute_force_on_noisy_series() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let len = rng.random_range(1..64);
            let decay: f64 = rng.random_range(0.3..0.95);
            let noise: f64 = rng.random_range(0.0..0.002);
            let s: Vec<f64> = (1..=len)
                .map(|t| 0.1 + decay.powi(t) + rng.random_range(-noise..=noise))
                .collect();
            assert_eq!(detect_convergence(&s, DEFAULT_EPSILON).map(|c| c.index), brute(&s, DEFAULT_EPSILON));
        }
    }

    #[test]
    fn short_series() {
        assert!(detect_convergence(&[], DEFAULT_EPSILON).is_none());
        assert!(detect_convergence(&[1.0], DEFAULT_EPSILON).is_none());
        assert_eq!(detect_convergence(&[1.0, 1.0], DEFAULT_EPSILON).map(|c| c.index), Some(1));
    }
}
