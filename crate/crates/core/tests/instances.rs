use flipcut::instance::{build_gn, build_hk, build_hk_with, sample_cut, sample_weights, GnLayout, HkLayout};
use flipcut::{RngSeed, Weight};
use num_bigint::BigInt;

#[test]
fn gn_counts_and_initial_sides() {
    for n in 0..=20 {
        let inst = build_gn(n);
        let g = &inst.graph;
        assert_eq!(g.n_vertices(), 8 * n + 4);
        assert_eq!(g.n_edges(), 13 * n + 3);
        assert_eq!(g.max_degree(), if n == 0 { 2 } else { 4 });
        let lay = GnLayout { n };
        let sigma = inst.initial_cut.as_ref().unwrap();
        for m in 1..=n {
            assert_eq!(sigma.side(lay.v(m, 1)), sigma.side(lay.v(m - 1, 1)));
            for j in 1..8 {
                assert_ne!(sigma.side(lay.v(m, j)), sigma.side(lay.v(m, j + 1)));
            }
        }
        assert_eq!(sigma.side(lay.w1()), sigma.side(lay.v(n, 1)));
        assert_eq!(sigma.side(lay.w2()), -sigma.side(lay.w1()));
    }
}

#[test]
fn gn_small_weights() {
    let g0 = build_gn(0);
    let w: Vec<i64> = g0.graph.weights().iter().map(|w| w.to_f64() as i64).collect();
    assert_eq!(w.len(), 3);
    assert!(w.contains(&7) && w.contains(&8) && w.contains(&16));

    let g1 = build_gn(1);
    let lay = GnLayout { n: 1 };
    let weight = |u, v| g1.graph.weight(g1.graph.edge_between(u, v).unwrap());
    assert_eq!(weight(lay.v(1, 1), lay.v(1, 2)), Weight::from_int(56));
    assert_eq!(weight(lay.v(1, 4), lay.v(0, 1)), Weight::from_int(-8));
    assert_eq!(g1.vertex("v[1][1]"), Some(lay.v(1, 1)));
}

#[test]
fn hk_trees_have_the_expected_shape() {
    for (k, n_k) in [(1, 1), (2, 3), (3, 10), (4, 7)] {
        let inst = build_hk(k, n_k).unwrap();
        let g = &inst.graph;
        assert_eq!(g.n_vertices(), 2 * k * (6 * n_k + 1));
        assert_eq!(g.n_edges(), 2 * k * 6 * n_k);
        let comps = g.components();
        assert_eq!(comps.len(), 2 * k);
        for comp in comps {
            let mut degrees: Vec<usize> = comp.iter().map(|&v| g.degree(v)).collect();
            degrees.sort_unstable();
            let mut expected = vec![1; 4 * n_k];
            expected.extend(vec![3; 2 * n_k]);
            expected.push(2 * n_k);
            expected.sort_unstable();
            assert_eq!(degrees, expected);
        }
        assert!(g.weights().iter().all(Weight::is_zero));
        assert!(inst.initial_cut.is_none());
        let lay = inst.hk_layout().unwrap();
        assert_eq!(lay, HkLayout { k, n_k });
    }
}

#[test]
fn hk_connectors_join_the_trees() {
    let inst = build_hk_with(3, 4, true).unwrap();
    assert_eq!(inst.graph.components().len(), 1);
}

#[test]
fn sampled_weights_stay_on_the_grid_and_average_out() {
    let inst = build_hk(5, 300).unwrap();
    let a = Weight::new(-1, 1);
    let b = Weight::new(3, 2);
    let s = sample_weights(&inst, &a, &b, &RngSeed::new(4)).unwrap();
    let ws = s.graph.weights();
    assert!(ws.len() >= 10_000);
    assert!(ws.iter().all(|w| *w >= a && *w <= b));
    let mean = ws.iter().map(Weight::to_f64).sum::<f64>() / ws.len() as f64;
    assert!((mean - 0.125).abs() < 0.02, "mean {mean}");
    // The grid step is (b - a)/2^53.
    let step = (b.to_rational() - a.to_rational()) / BigInt::from(2u64.pow(53));
    for w in ws.iter().take(100) {
        assert!(((w.to_rational() - a.to_rational()) / &step).is_integer());
    }
}

#[test]
fn uniform_unit_weights_have_mean_one_half() {
    let inst = build_hk(10, 834).unwrap();
    let s = sample_weights(&inst, &Weight::zero(), &Weight::from_int(1), &RngSeed::new(9)).unwrap();
    let ws = s.graph.weights();
    assert!(ws.len() >= 100_000);
    let mean = ws.iter().map(Weight::to_f64).sum::<f64>() / ws.len() as f64;
    assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
}

#[test]
fn random_cuts_are_balanced_and_independent_of_weights() {
    let inst = build_hk(10, 834).unwrap();
    let cut = sample_cut(&inst, &RngSeed::new(2));
    assert!(cut.len() >= 100_000);
    let plus = cut.sides().iter().filter(|&&s| s == 1).count() as f64 / cut.len() as f64;
    assert!((plus - 0.5).abs() < 0.01, "fraction {plus}");

    let small = build_hk(2, 5).unwrap();
    let w1 = sample_weights(&small, &Weight::zero(), &Weight::from_int(1), &RngSeed::new(1)).unwrap();
    let w2 = sample_weights(&small, &Weight::zero(), &Weight::from_int(1), &RngSeed::new(2)).unwrap();
    assert_ne!(w1.graph.weights(), w2.graph.weights());
    assert_eq!(sample_cut(&w1, &RngSeed::new(3)), sample_cut(&w2, &RngSeed::new(3)));
    assert_eq!(sample_cut(&small, &RngSeed::new(3)), sample_cut(&w1, &RngSeed::new(3)));
}

#[test]
fn sampling_is_deterministic_and_rejects_empty_intervals() {
    let inst = build_hk(2, 4).unwrap();
    let one = Weight::from_int(1);
    let a = sample_weights(&inst, &Weight::zero(), &one, &RngSeed::new(5)).unwrap();
    let b = sample_weights(&inst, &Weight::zero(), &one, &RngSeed::new(5)).unwrap();
    assert_eq!(a.graph.weights(), b.graph.weights());
    assert!(sample_weights(&inst, &one, &one, &RngSeed::new(5)).is_err());
    assert!(sample_weights(&inst, &one, &Weight::zero(), &RngSeed::new(5)).is_err());
}
