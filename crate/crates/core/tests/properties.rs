mod common;

use common::*;
use flipcut::engine::{best_move, LocalState};
use flipcut::maxcut::{cut_value, improvement};
use flipcut::signs::{best_signs_exact, epsilon_exact};
use flipcut::weight::Rational;
use flipcut::{Cut, Weight, WeightedGraph};
use num_bigint::BigInt;
use proptest::prelude::*;

fn graph_and_cut(max_n: usize) -> impl Strategy<Value = (WeightedGraph, Cut)> {
    (1..=max_n, any::<u64>(), 0.2f64..0.9, any::<bool>()).prop_map(|(n, seed, p, dyadic)| {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, p, 9, dyadic);
        let sigma = random_cut(&mut r, n);
        (g, sigma)
    })
}

fn small_set(n: usize, seed: u64) -> Vec<usize> {
    let subsets = all_subsets(n.min(10), 3);
    subsets[(seed as usize) % subsets.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cut_value_matches_edge_oracle((g, sigma) in graph_and_cut(10)) {
        prop_assert_eq!(cut_value(&g, &sigma).unwrap().to_rational(), oracle_cut_value(&g, &sigma));
    }

    #[test]
    fn flipping_twice_is_identity((g, sigma) in graph_and_cut(10), pick in any::<u64>()) {
        let set = small_set(g.n_vertices(), pick);
        let mut twice = sigma.clone();
        twice.flip_all(&set);
        twice.flip_all(&set);
        prop_assert_eq!(&twice, &sigma);
        let there = improvement(&g, &sigma, &set).unwrap();
        let mut moved = sigma.clone();
        moved.flip_all(&set);
        let back = improvement(&g, &moved, &set).unwrap();
        prop_assert_eq!(there.to_rational(), -back.to_rational());
    }

    #[test]
    fn negating_every_side_keeps_the_value((g, sigma) in graph_and_cut(10)) {
        prop_assert_eq!(cut_value(&g, &sigma).unwrap(), cut_value(&g, &sigma.negated()).unwrap());
    }

    #[test]
    fn improvement_matches_recomputation((g, sigma) in graph_and_cut(10), pick in any::<u64>()) {
        let set = small_set(g.n_vertices(), pick);
        prop_assert_eq!(improvement(&g, &sigma, &set).unwrap().to_rational(), oracle_improvement(&g, &sigma, &set));
    }

    #[test]
    fn single_vertex_gain_is_same_minus_opposite((g, sigma) in graph_and_cut(10)) {
        for v in 0..g.n_vertices() {
            let mut expected = Rational::from_integer(BigInt::from(0));
            for &(u, e) in g.neighbors(v) {
                let w = g.weight(e).to_rational();
                if sigma.side(u) == sigma.side(v) { expected += w } else { expected -= w }
            }
            prop_assert_eq!(improvement(&g, &sigma, &[v]).unwrap().to_rational(), expected);
        }
    }

    #[test]
    fn incremental_gains_track_flips((g, sigma) in graph_and_cut(10), picks in prop::collection::vec(any::<u64>(), 1..8)) {
        let mut state = LocalState::new(&g, sigma).unwrap();
        for pick in picks {
            let set = small_set(g.n_vertices(), pick);
            let predicted = Weight::new(state.improvement_num(&set), g.denom_exp());
            prop_assert_eq!(predicted.to_rational(), oracle_improvement(&g, state.cut(), &set));
            state.apply(&set);
            for v in 0..g.n_vertices() {
                prop_assert_eq!(state.gain_weight(v).to_rational(), oracle_improvement(&g, state.cut(), &[v]));
            }
        }
    }

    #[test]
    fn best_move_matches_brute_force(n in 1usize..=8, seed in any::<u64>(), k in 1usize..=3) {
        // Tiny weights make ties common.
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.6, 2, false);
        let sigma = random_cut(&mut r, n);
        let state = LocalState::new(&g, sigma.clone()).unwrap();
        let mut best: Option<(Vec<usize>, Rational)> = None;
        for set in all_subsets(n, k) {
            let value = oracle_improvement(&g, &sigma, &set);
            let better = match &best {
                None => true,
                Some((bs, bv)) => value > *bv || (value == *bv && set < *bs),
            };
            if better { best = Some((set, value)); }
        }
        let got = best_move(&state, k, 1 << 20).unwrap();
        match best.filter(|(_, v)| *v > Rational::from_integer(BigInt::from(0))) {
            None => prop_assert!(got.is_none()),
            Some((set, value)) => {
                let (gs, gv) = got.expect("an improving move exists");
                prop_assert_eq!(Weight::new(gv, g.denom_exp()).to_rational(), value);
                prop_assert_eq!(gs, set);
            }
        }
    }

    #[test]
    fn exact_signs_match_enumeration(nums in prop::collection::vec(-40i64..40, 0..=12), exp in 0u32..3, x in -60i64..60) {
        let xs: Vec<Weight> = nums.iter().map(|&v| Weight::new(v, exp)).collect();
        let target = Rational::from_integer(BigInt::from(x)) / BigInt::from(3);
        let got = best_signs_exact(&target, &xs).unwrap();
        let (err, signs) = naive_best_error(&target, &xs);
        prop_assert_eq!(&got.error, &err);
        prop_assert_eq!(got.signs, signs);
    }

    #[test]
    fn negating_the_target_mirrors_the_error(nums in prop::collection::vec(1i64..50, 1..=10), x in -80i64..80) {
        let xs: Vec<Weight> = nums.iter().map(|&v| Weight::from_int(v)).collect();
        let t = Rational::from_integer(BigInt::from(x));
        prop_assert_eq!(best_signs_exact(&t, &xs).unwrap().error, best_signs_exact(&-t.clone(), &xs).unwrap().error);
    }

    #[test]
    fn epsilon_ignores_order_and_signs(nums in prop::collection::vec(-30i64..30, 1..=8), flips in any::<u8>(), lo in -20i64..20, width in 0i64..20) {
        let xs: Vec<Weight> = nums.iter().map(|&v| Weight::new(v, 1)).collect();
        let mut ys: Vec<Weight> = xs.iter().enumerate()
            .map(|(i, w)| if flips >> (i % 8) & 1 == 1 { Weight::new(-w.numerator().clone(), w.exponent()) } else { w.clone() })
            .collect();
        ys.reverse();
        let l = Rational::from_integer(BigInt::from(lo));
        let h = Rational::from_integer(BigInt::from(lo + width));
        prop_assert_eq!(epsilon_exact(&l, &h, &xs).unwrap(), epsilon_exact(&l, &h, &ys).unwrap());
    }
}

#[test]
fn epsilon_agrees_with_a_fine_grid() {
    let mut r = rng(20);
    for _ in 0..3 {
        let xs: Vec<Weight> = (0..12).map(|_| flipcut::instance::sample_grid_weight(&mut r, &Weight::zero(), &Weight::from_int(1))).collect();
        let n = xs.len() as f64;
        let lo = Rational::from_integer(BigInt::from(12)) / BigInt::from(5);
        let hi = Rational::from_integer(BigInt::from(24)) / BigInt::from(5);
        let exact = flipcut::weight::rational_to_f64(&epsilon_exact(&lo, &hi, &xs).unwrap());
        let floats: Vec<f64> = xs.iter().map(|w| w.to_f64()).collect();
        let grid = grid_epsilon(n / 5.0, 2.0 * n / 5.0, &floats);
        assert!((exact - grid).abs() <= 2f64.powi(-19), "exact {exact}, grid {grid}");
    }
}
