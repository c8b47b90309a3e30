//! Transform sizes that avoid large prime factors.
//!
//! A size is accepted when it is a power of two times at most two factors
//! drawn (with repetition) from `{3, 5, 7}`. Such sizes run close to
//! power-of-two speed; sizes with large prime factors can cost several times
//! more. Nothing in the crate pads automatically; these helpers are for
//! choosing benchmark resolutions.

const ODD_PARTS: [usize; 10] = [1, 3, 5, 7, 9, 15, 21, 25, 35, 49];

pub fn is_smooth_size(n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let odd = n >> n.trailing_zeros();
    ODD_PARTS.contains(&odd)
}

/// Smallest accepted size `>= n`.
pub fn next_smooth_size(n: usize) -> usize {
    (n.max(1)..).find(|&m| is_smooth_size(m)).expect("unbounded search")
}

/// All accepted sizes in `[lo, hi]`.
pub fn smooth_sizes_between(lo: usize, hi: usize) -> Vec<usize> {
    (lo..=hi).filter(|&m| is_smooth_size(m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_and_rejects() {
        for n in [1, 2, 3, 6, 12, 20, 28, 36, 49 * 4, 1024, 35 * 64] {
            assert!(is_smooth_size(n), "{n}");
        }
        for n in [0, 11, 13, 27, 45 * 2, 63, 125, 2 * 3 * 5 * 7, 1023] {
            assert!(!is_smooth_size(n), "{n}");
        }
    }

    #[test]
    fn next_size() {
        assert_eq!(next_smooth_size(11), 12);
        assert_eq!(next_smooth_size(1000), 1024);
        assert_eq!(next_smooth_size(64), 64);
        assert_eq!(smooth_sizes_between(60, 72), vec![60, 64, 70, 72]);
    }
}
