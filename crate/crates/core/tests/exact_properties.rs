mod common;

use common::arb_config;
use itertools::Itertools;
use proptest::prelude::*;
use queens_core::{complete, count_completions, enumerate_all, is_valid_partial, Completion, SolveBudget, Symmetry};

/// Row permutations with no two queens on a diagonal.
fn permutation_count(n: usize) -> u64 {
    (1..=n)
        .permutations(n)
        .filter(|p| {
            (0..n).all(|i| ((i + 1)..n).all(|j| (p[i] as isize - p[j] as isize).unsigned_abs() != j - i))
        })
        .count() as u64
}

#[test]
fn enumeration_matches_permutation_filter() {
    for n in 1..=9 {
        assert_eq!(enumerate_all(n).unwrap(), permutation_count(n), "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn completions_are_valid_supersets(cfg in arb_config(4..=12, 5)) {
        if let Completion::Completed(full) = complete(&cfg, SolveBudget::UNLIMITED).unwrap() {
            prop_assert!(full.is_complete());
            prop_assert!(is_valid_partial(full.queens(), full.n()).unwrap());
            prop_assert!(cfg.is_subset_of(&full));
        }
    }

    #[test]
    fn adding_a_queen_never_adds_completions(cfg in arb_config(4..=10, 4), extra in any::<u32>()) {
        let free = queens_core::unattacked(&cfg);
        prop_assume!(!free.is_empty());
        let bigger = cfg.with_queen(free[extra as usize % free.len()]).unwrap();
        let before = count_completions(&cfg, SolveBudget::UNLIMITED).unwrap().count;
        let after = count_completions(&bigger, SolveBudget::UNLIMITED).unwrap().count;
        prop_assert!(after <= before);
    }

    #[test]
    fn incompletability_is_symmetric(cfg in arb_config(4..=10, 4)) {
        let verdict = complete(&cfg, SolveBudget::UNLIMITED).unwrap() == Completion::Incompletable;
        for s in Symmetry::ALL {
            let moved = complete(&cfg.transformed(s), SolveBudget::UNLIMITED).unwrap() == Completion::Incompletable;
            prop_assert_eq!(moved, verdict);
        }
    }
}
