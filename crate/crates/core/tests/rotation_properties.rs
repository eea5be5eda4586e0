use std::collections::HashMap;

use ddfrot::{build_schedule, trial_rng, Ordering};
use proptest::prelude::*;

fn column_counts(n: usize, l: usize, t: usize, ordering: Ordering, seed: u64) -> HashMap<Vec<usize>, usize> {
    let s = build_schedule(n, l, t, ordering, &mut trial_rng(seed, 0)).unwrap();
    let mut counts = HashMap::new();
    for slot in 0..t {
        *counts.entry(s.column(slot)).or_insert(0) += 1;
    }
    counts
}

fn small_alphabet() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4, 1usize..=6).prop_filter("period <= 1024", |(n, l)| l.pow(*n as u32) <= 1024)
}

proptest! {
    #[test]
    fn entries_are_unit_modulus_roots(n in 1usize..5, l in 1usize..40, t in 1usize..200, seed: u64, random: bool) {
        let ordering = if random { Ordering::Random } else { Ordering::Lexicographic };
        let s = build_schedule(n, l, t, ordering, &mut trial_rng(seed, 1)).unwrap();
        for k in 0..n {
            for slot in 0..t {
                let r = s.get(k, slot);
                prop_assert!((r.norm() - 1.0).abs() <= 1e-12);
                let angle = 2.0 * std::f64::consts::PI * s.angle_index(k, slot) as f64 / l as f64;
                prop_assert!((r - num_complex::Complex64::cis(angle)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn one_period_covers_every_tuple_once((n, l) in small_alphabet(), seed: u64) {
        let period = l.pow(n as u32);
        for ordering in [Ordering::Lexicographic, Ordering::Random] {
            let counts = column_counts(n, l, period, ordering, seed);
            prop_assert_eq!(counts.len(), period);
            prop_assert!(counts.values().all(|&c| c == 1));
        }
    }

    #[test]
    fn longer_frames_use_tuples_evenly((n, l) in small_alphabet(), periods in 1usize..4, extra in 0usize..50, seed: u64) {
        let period = l.pow(n as u32);
        let t = periods * period + extra.min(period - 1);
        for ordering in [Ordering::Lexicographic, Ordering::Random] {
            let counts = column_counts(n, l, t, ordering, seed);
            prop_assert_eq!(counts.len(), period);
            prop_assert!(counts.values().all(|&c| c == periods || c == periods + 1));
        }
    }

    #[test]
    fn lexicographic_cycles((n, l) in small_alphabet(), t in 1usize..300) {
        let s = build_schedule(n, l, t, Ordering::Lexicographic, &mut trial_rng(0, 0)).unwrap();
        let period = l.pow(n as u32);
        for slot in 0..t {
            let mut code = 0;
            for k in 0..n {
                code = code * l + s.angle_index(k, slot);
            }
            prop_assert_eq!(code, slot % period);
        }
    }

    #[test]
    fn random_mode_reproducible(n in 1usize..4, l in 1usize..9, t in 1usize..130, seed: u64, index: u64) {
        let a = build_schedule(n, l, t, Ordering::Random, &mut trial_rng(seed, index)).unwrap();
        let b = build_schedule(n, l, t, Ordering::Random, &mut trial_rng(seed, index)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn short_random_frames_have_distinct_columns(n in 2usize..4, l in 3usize..9, seed: u64) {
        let period = l.pow(n as u32);
        let t = period / 2;
        prop_assume!(t >= 1);
        let counts = column_counts(n, l, t, Ordering::Random, seed);
        prop_assert_eq!(counts.len(), t);
    }
}

#[test]
fn random_order_differs_between_trials() {
    let a = build_schedule(2, 4, 16, Ordering::Random, &mut trial_rng(1, 0)).unwrap();
    let b = build_schedule(2, 4, 16, Ordering::Random, &mut trial_rng(1, 1)).unwrap();
    assert_ne!(a, b);
}
