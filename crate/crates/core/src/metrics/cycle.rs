use serde::{Deserialize, Serialize};

/// Repetition found in a sequence of hologram hashes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cycle {
    /// Smallest period; 1 is a fixed point.
    pub period: usize,
    /// Earliest 0-based index from which `hash[t] == hash[t + period]` holds to the end.
    pub onset: usize,
}

/// Finds the smallest period `p` and earliest onset such that every hash from
/// the onset on repeats `p` steps later, with at least one repeat observed.
///
/// The iteration map is deterministic in the hologram, so one observed repeat
/// of an exact state already implies the cycle continues.
pub fn detect_cycle(trace: &[u64]) -> Option<Cycle> {
    let len = trace.len();
    (1..len).find_map(|period| {
        let last = len - 1 - period;
        if trace[last] != trace[last + period] {
            return None;
        }
        let mut onset = last;
        while onset > 0 && trace[onset - 1] == trace[onset - 1 + period] {
            onset -= 1;
        }
        Some(Cycle { period, onset })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fixed_point() {
        assert_eq!(detect_cycle(&[7, 7, 7]), Some(Cycle { period: 1, onset: 0 }));
    }

    #[test]
    fn alternating() {
        assert_eq!(detect_cycle(&[1, 2, 1, 2, 1, 2]), Some(Cycle { period: 2, onset: 0 }));
    }

    #[test]
    fn transient_then_cycle() {
        assert_eq!(detect_cycle(&[3, 1, 2, 1, 2]), Some(Cycle { period: 2, onset: 1 }));
    }

    #[test]
    fn no_repeat() {
        assert_eq!(detect_cycle(&[1, 2, 3, 4]), None);
        assert_eq!(detect_cycle(&[1]), None);
        assert_eq!(detect_cycle(&[]), None);
    }

    // Traces produced by iterating a deterministic map, like the hologram loop.
    fn map_trace() -> impl Strategy<Value = Vec<u64>> {
        (1usize..12, 1usize..=64).prop_flat_map(|(states, len)| {
            (prop::collection::vec(0..states as u64, states), 0..states as u64).prop_map(move |(map, start)| {
                let mut v = Vec::with_capacity(len);
                let mut s = start;
                for _ in 0..len {
                    v.push(s);
                    s = map[s as usize];
                }
                v
            })
        })
    }

    // every (period, onset) satisfying the repetition condition, by direct scan
    fn all_repetitions(trace: &[u64]) -> Vec<(usize, usize)> {
        let len = trace.len();
        let mut out = Vec::new();
        for p in 1..len {
            for onset in 0..len - p {
                if (onset..len - p).all(|t| trace[t] == trace[t + p]) {
                    out.push((p, onset));
                    break;
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn period_divides_longer_repetitions(trace in map_trace()) {
            let found = detect_cycle(&trace);
            let reps = all_repetitions(&trace);
            match found {
                None => prop_assert!(reps.is_empty()),
                Some(c) => {
                    prop_assert_eq!(Some(&(c.period, c.onset)), reps.first());
                    for (q, _) in reps {
                        prop_assert_eq!(q % c.period, 0, "period {} does not divide {}", c.period, q);
                    }
                }
            }
        }
    }
}
