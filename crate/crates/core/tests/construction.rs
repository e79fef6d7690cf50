mod common;

use common::*;
use flipcut::construction::{
    counter_sequence, ln_length, ln_sequence, setup_sequence, token_certificate, two_flip_longest, verify_gn,
    CounterStepKind, SetupMode, TokenStep,
};
use flipcut::instance::{build_gn, build_hk, sample_cut, sample_weights, GnLayout};
use flipcut::maxcut::is_improving;
use flipcut::weight::inv_pow3;
use flipcut::{Cut, FlipSequence, RngSeed, Weight};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn ln_lengths_follow_the_recurrence() {
    let mut len = 2u128;
    for n in 0..=10 {
        assert_eq!(ln_length(n), len);
        assert_eq!(ln_length(n), 6 * 3u128.pow(n as u32) - 4);
        len = 3 * len + 8;
    }
    assert_eq!([ln_length(0), ln_length(1), ln_length(2)], [2, 14, 50]);
}

#[test]
fn ln_moves_every_path_vertex_an_odd_number_of_times() {
    for n in 0..=10 {
        let seq = ln_sequence(n);
        assert_eq!(seq.len() as u128, ln_length(n));
        assert!(seq.steps().iter().all(|s| s.len() == 1));
        let lay = GnLayout { n };
        let counts = seq.occurrences(lay.n_vertices());
        for (v, &c) in counts.iter().enumerate() {
            if v == lay.w1() || v == lay.w2() {
                assert_eq!(c, 0);
            } else {
                assert_eq!(c % 2, 1, "n = {n}, vertex {v}");
            }
        }
    }
}

#[test]
fn gn_certifies_up_to_eight() {
    for n in 0..=8 {
        let report = verify_gn(n, usize::MAX);
        assert!(report.passed(), "n = {n}: {:?}", report.violations);
        assert_eq!(report.length as u128, 6 * 3u128.pow(n as u32) - 4);
        if n <= 1 {
            assert_eq!(report.exhaustive_unique, Some(true));
        }
    }
}

#[test]
fn gn_budget_marks_the_report_incomplete() {
    let report = verify_gn(2, 10);
    assert!(!report.complete);
    assert!(!report.passed());
}

#[test]
fn g0_sequence_is_the_two_path_ends() {
    let lay = GnLayout { n: 0 };
    assert_eq!(ln_sequence(0), FlipSequence::singletons([lay.v(0, 1), lay.v(0, 8)]));
    let inst = build_gn(0);
    assert!(is_improving(&inst.graph, inst.initial_cut.as_ref().unwrap(), &ln_sequence(0)).unwrap().ok);
}

fn sampled(k: usize, n_k: usize, a: Weight, b: Weight, seed: u64) -> (flipcut::Instance, Cut) {
    let seed = RngSeed::new(seed);
    let inst = sample_weights(&build_hk(k, n_k).unwrap(), &a, &b, &seed).unwrap();
    let sigma = sample_cut(&inst, &seed);
    (inst, sigma)
}

#[test]
fn setup_moves_only_improving_leaves() {
    for (seed, (a, b)) in [(0, 1), (-1, 3), (-3, 1), (2, 5)].into_iter().enumerate() {
        let (a, b) = (Weight::from_int(a), Weight::from_int(b));
        let (inst, sigma) = sampled(3, 56, a.clone(), b.clone(), seed as u64);
        let res = setup_sequence(&inst, &sigma, SetupMode::Adaptive).unwrap();
        let lay = inst.hk_layout().unwrap();
        assert!(is_improving(&inst.graph, &sigma, &res.sequence).unwrap().ok);
        for t in &res.targets {
            let tree = lay.tree_of(t.center);
            // Free leaves meet the pendant event; extensions are at least improving.
            for &s in &t.free {
                let j = (0..lay.leaves_per_tree()).find(|&j| lay.leaf(tree, j) == s).unwrap();
                let [p1, p2] = lay.pendants(tree, j);
                let x = |u, v| inst.graph.weight(inst.graph.edge_between(u, v).unwrap()).to_rational();
                let sum = x(s, p1) + x(s, p2);
                if (&a + &b).is_negative() {
                    assert!(sigma.side(p1) != sigma.side(s) && sigma.side(p2) != sigma.side(s) && sum < a.to_rational());
                } else {
                    assert!(sigma.side(p1) == sigma.side(s) && sigma.side(p2) == sigma.side(s) && sum > b.to_rational());
                }
            }
            for s in &t.extended {
                assert!(!t.free.contains(s));
                assert!(oracle_improvement(&inst.graph, &sigma, &[*s]) > BigInt::from(0).into());
            }
            // Two computations of the center's improvement agree.
            let neighbor_sum = oracle_improvement(&inst.graph, &res.final_cut, &[t.center]);
            assert_eq!(neighbor_sum, &t.achieved * res.scale.to_rational());
            assert_eq!(t.ok, t.deviation < inv_pow3(3));
        }
    }
}

#[test]
fn setup_replays_identically() {
    let (inst, sigma) = sampled(2, 40, Weight::zero(), Weight::from_int(1), 8);
    let one = setup_sequence(&inst, &sigma, SetupMode::Adaptive).unwrap();
    let two = setup_sequence(&inst, &sigma, SetupMode::Adaptive).unwrap();
    assert_eq!(one, two);
}

#[test]
fn counter_steps_certify_on_tuned_cuts() {
    let mut certified = 0;
    for seed in 0..6 {
        let k = 2 + seed as usize % 3;
        let (inst, sigma) = sampled(k, 32 * (k + 4), Weight::zero(), Weight::from_int(1), seed);
        let setup = setup_sequence(&inst, &sigma, SetupMode::Adaptive).unwrap();
        if !setup.all_ok {
            assert!(counter_sequence(&inst, &setup.final_cut).is_err());
            continue;
        }
        let cert = counter_sequence(&inst, &setup.final_cut).unwrap();
        assert!(cert.passed());
        assert!(cert.sequence.len() >= 1 << (k - 1));
        assert!(is_improving(&inst.graph, &setup.final_cut, &cert.sequence).unwrap().ok);
        let lay = inst.hk_layout().unwrap();
        for step in &cert.steps {
            assert!(step.vertices.iter().all(|&c| lay.level_of_center(c).is_some()));
            assert_eq!(step.improvement, step.predicted);
            if let CounterStepKind::Triple { .. } = step.kind {
                assert_eq!(step.vertices.len(), 3);
            }
        }
        certified += 1;
    }
    assert!(certified >= 5);
}

#[test]
fn counter_rejects_untuned_cuts() {
    let (inst, sigma) = sampled(2, 10, Weight::zero(), Weight::from_int(1), 3);
    let err = counter_sequence(&inst, &sigma).unwrap_err().to_string();
    assert!(err.contains("center"), "{err}");
}

#[test]
fn two_flip_sequences_respect_the_token_bound() {
    let mut r = rng(2024);
    let mut moved_tokens = 0;
    for _ in 0..50 {
        let n = r.gen_range(4..=12);
        let dyadic = r.gen();
        let g = random_graph(&mut r, n, 0.4, 20, dyadic);
        let sigma = random_cut(&mut r, n);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut r);
        let mut set = Vec::new();
        for v in order {
            if set.len() < 5 && set.iter().all(|&u| g.edge_between(u, v).is_none()) {
                set.push(v);
            }
        }
        let (len, seq) = two_flip_longest(&g, &sigma, &set).unwrap();
        assert!(len <= set.len() * set.len());
        assert!(is_improving(&g, &sigma, &seq).unwrap().ok);
        let cert = token_certificate(&g, &sigma, &set, &seq).unwrap();
        assert!(cert.valid(), "{cert:?}");
        assert_eq!(cert.trace.len(), len);
        moved_tokens += cert.trace.iter().filter(|s| matches!(s, TokenStep::Moved { .. })).count();
    }
    assert!(moved_tokens > 0);
}

#[test]
fn two_flip_longest_is_a_true_maximum() {
    // Depth-first enumeration of every improving sequence on tiny sets.
    fn deepest(g: &flipcut::WeightedGraph, sigma: &Cut, set: &[usize]) -> usize {
        let mut best = 0;
        for i in 0..set.len() {
            for j in i..set.len() {
                let mv: Vec<usize> = if i == j { vec![set[i]] } else { vec![set[i], set[j]] };
                if oracle_improvement(g, sigma, &mv) > BigInt::from(0).into() {
                    let mut next = sigma.clone();
                    next.flip_all(&mv);
                    best = best.max(1 + deepest(g, &next, set));
                }
            }
        }
        best
    }
    let mut r = rng(11);
    let mut checked = 0;
    for _ in 0..30 {
        let n = r.gen_range(4..=9);
        let g = random_graph(&mut r, n, 0.5, 9, false);
        let sigma = random_cut(&mut r, n);
        let mut set = Vec::new();
        for v in 0..n {
            if set.len() < 4 && set.iter().all(|&u| g.edge_between(u, v).is_none()) {
                set.push(v);
            }
        }
        checked += set.len();
        assert_eq!(two_flip_longest(&g, &sigma, &set).unwrap().0, deepest(&g, &sigma, &set));
    }
    assert!(checked >= 60);
}
