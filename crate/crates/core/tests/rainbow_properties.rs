mod common;

use common::arb_config;
use num::BigRational;
use proptest::prelude::*;
use queens_core::rainbow::{
    augment, board_to_graph, check_proper_linear, colour_split, nibble_matching, weight_shift_regularize,
    PipelineParams, RainbowMatching,
};
use queens_core::{is_valid_partial, regularize_weighting};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn board_graphs_are_proper_and_linear(cfg in arb_config(1..=20, 6)) {
        prop_assert!(check_proper_linear(&board_to_graph(&cfg).graph));
    }

    #[test]
    fn greedy_then_augment_keeps_invariants(cfg in arb_config(6..=30, 3), seed in any::<u64>()) {
        let bg = board_to_graph(&cfg);
        let g = &bg.graph;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = nibble_matching(g, 1.0, 1, &mut rng).unwrap().matching;
        prop_assert!(m.check_invariants());
        let mut blocked = vec![false; g.num_colours()];
        for c in 0..g.num_colours() {
            blocked[c] = rng.gen_bool(0.05);
        }
        while let Some(bigger) = augment(g, &m, &blocked, 10) {
            prop_assert_eq!(bigger.len(), m.len() + 1);
            prop_assert!(bigger.check_invariants());
            // new edges avoid the blocked colours
            for e in bigger.edges() {
                let old = m.mate_of_a(e.a) == Some(e.b);
                prop_assert!(old || e.colours.iter().all(|&c| !blocked[c as usize]));
            }
            m = bigger;
        }
        let placed = bg.completion(&cfg, &m).unwrap();
        prop_assert!(is_valid_partial(placed.queens(), cfg.n()).unwrap());
    }

    #[test]
    fn random_matching_operations_keep_invariants(ops in prop::collection::vec((any::<bool>(), 0usize..8, 0usize..8, 0u32..20, 0u32..20), 1..200)) {
        let mut m = RainbowMatching::new(8, 8, 20);
        for (add, a, b, c1, c2) in ops {
            if add {
                if m.can_add(a, b, &[c1, c2]) {
                    prop_assert!(c1 != c2);
                    m.add(a, b, &[c1, c2]).unwrap();
                } else {
                    prop_assert!(m.add(a, b, &[c1, c2]).is_err());
                }
            } else {
                m.remove_at_a(a);
            }
            prop_assert!(m.check_invariants());
        }
    }

    #[test]
    fn regularization_equalises_and_conserves(cfg in arb_config(7..=14, 2)) {
        let bg = board_to_graph(&cfg);
        let g = &bg.graph;
        prop_assume!(g.a_len() >= 2);
        let sw = regularize_weighting(cfg.n()).unwrap();
        let w0: Vec<BigRational> = (0..g.num_edges()).map(|e| {
            let (a, b) = g.ends(e);
            sw.value(bg.square(a, b))
        }).collect();
        let Ok(out) = weight_shift_regularize(g, &w0, 1) else { return Ok(()) };
        let part_total = |w: &[BigRational]| (0..g.a_len())
            .flat_map(|a| g.edges_at_a(a).iter().map(|&e| w[e as usize].clone()))
            .fold(BigRational::from_integer(0.into()), |x, y| x + y);
        prop_assert_eq!(part_total(&w0), part_total(&out.weights));
        for a in 0..g.a_len() {
            let t = g.edges_at_a(a).iter().fold(BigRational::from_integer(0.into()), |x, &e| x + &out.weights[e as usize]);
            prop_assert_eq!(&t, &out.mean_a);
        }
        for b in 0..g.b_len() {
            let t = g.edges_at_b(b).iter().fold(BigRational::from_integer(0.into()), |x, &e| x + &out.weights[e as usize]);
            prop_assert_eq!(&t, &out.mean_b);
        }
    }

    #[test]
    fn colour_labels_partition_the_colours(seed in any::<u64>(), alpha in 0.0f64..2.0) {
        let g = board_to_graph(&queens_core::PartialConfig::empty(12).unwrap()).graph;
        let params = PipelineParams { alpha, ..Default::default() };
        let split = colour_split(&g, &params, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(split.labels.len(), g.num_colours());
        prop_assert!(split.labels.iter().all(|&l| l < 6));
        let kept: usize = split.parts.iter().map(|p| p.num_edges()).sum();
        let pure = (0..g.num_edges()).filter(|&e| split.label_of(g.colours(e)).is_some()).count();
        prop_assert_eq!(kept, pure);
    }
}
