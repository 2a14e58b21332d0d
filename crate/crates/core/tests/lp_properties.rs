mod common;

use common::arb_config;
use num::{BigInt, BigRational};
use proptest::prelude::*;
use queens_core::{
    certify_incompletable, complete, covers, max_fractional_completion, min_cover_value, unattacked,
    weighting_value, Completion, FractionalCompletion, SolveBudget,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn duality_and_soundness(cfg in arb_config(4..=10, 5)) {
        let packing = max_fractional_completion(&cfg).unwrap();
        let cover = min_cover_value(&cfg).unwrap();
        // strong duality, exact
        prop_assert_eq!(&packing.optimal_value, &cover.optimal_value);
        // both optima are feasible and weak duality holds across the pairs
        let lambda = unattacked(&cfg);
        for outcome in [&packing, &cover] {
            prop_assert!(outcome.primal.is_feasible_for(&cfg));
            prop_assert!(covers(&outcome.dual, &lambda).covered);
            prop_assert!(weighting_value(&outcome.dual) >= outcome.primal.total());
        }
        prop_assert!(weighting_value(&cover.dual) >= packing.primal.total());
        prop_assert!(weighting_value(&packing.dual) >= cover.primal.total());

        let exact = complete(&cfg, SolveBudget::UNLIMITED).unwrap();
        let need = BigRational::from_integer(BigInt::from(cfg.n() - cfg.len()));
        if let Completion::Completed(full) = &exact {
            // the completion is itself a 0/1 packing
            let mut x = FractionalCompletion::new(cfg.n());
            for q in full.queens().iter().filter(|q| !cfg.contains(**q)) {
                x.set(*q, BigRational::from_integer(1.into())).unwrap();
            }
            prop_assert!(x.is_feasible_for(&cfg));
            prop_assert!(weighting_value(&cover.dual) >= x.total());
            prop_assert!(packing.optimal_value >= need);
        }
        if certify_incompletable(&cfg, &cover.dual).unwrap() {
            prop_assert_eq!(exact, Completion::Incompletable);
        }
    }
}
