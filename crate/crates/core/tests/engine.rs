mod common;

use common::*;
use flipcut::construction::{ln_length, setup_sequence, SetupMode};
use flipcut::engine::{list_improving_moves, run_flip, FlipConfig, PivotRule, Termination};
use flipcut::instance::{build_gn, build_hk, sample_cut, sample_weights, GnLayout};
use flipcut::maxcut::{cut_value, is_local_optimum};
use flipcut::{Cut, RngSeed, Weight, WeightedGraph};
use rand::seq::SliceRandom;

fn gn_start(n: usize) -> (WeightedGraph, Cut) {
    let inst = build_gn(n);
    (inst.graph, inst.initial_cut.unwrap())
}

#[test]
fn greedy_on_g1_takes_fourteen_steps() {
    let (g, sigma) = gn_start(1);
    let trace = run_flip(&g, &sigma, &PivotRule::Greedy, &FlipConfig::new(1, 1_000_000)).unwrap();
    assert_eq!(trace.terminated, Termination::LocalOpt);
    assert_eq!(trace.step_count, 14);
}

#[test]
fn only_the_start_vertex_improves_initially() {
    for n in 0..=4 {
        let (g, sigma) = gn_start(n);
        let moves = list_improving_moves(&g, &sigma, 1, 1 << 20).unwrap();
        let sets: Vec<_> = moves.into_iter().map(|(s, _)| s).collect();
        assert_eq!(sets, vec![vec![GnLayout { n }.v(n, 1)]], "n = {n}");
    }
}

#[test]
fn lone_path_edge_is_stable_or_pairs_cancel() {
    let g = WeightedGraph::new(2, [(0, 1, Weight::from_int(7))]).unwrap();
    let trace = run_flip(&g, &"+-".parse().unwrap(), &PivotRule::Greedy, &FlipConfig::new(1, 10)).unwrap();
    assert_eq!((trace.step_count, trace.terminated), (0, Termination::LocalOpt));
    let sets: Vec<_> = list_improving_moves(&g, &"++".parse().unwrap(), 2, 100).unwrap().into_iter().map(|(s, _)| s).collect();
    assert!(sets.contains(&vec![0]) && sets.contains(&vec![1]));
    assert!(!sets.contains(&vec![0, 1]));
}

#[test]
fn every_pivot_rule_follows_the_unique_execution() {
    for n in 0..=3 {
        let (g, sigma) = gn_start(n);
        let budget = ln_length(n) as usize + 10;
        let config = FlipConfig::new(1, budget);
        let greedy = run_flip(&g, &sigma, &PivotRule::Greedy, &config).unwrap();
        assert_eq!(greedy.step_count as u128, ln_length(n));
        let nv = g.n_vertices();
        let mut shuffled: Vec<usize> = (0..nv).collect();
        shuffled.shuffle(&mut rng(n as u64));
        let orders = [(0..nv).collect::<Vec<_>>(), (0..nv).rev().collect(), shuffled];
        for order in orders {
            let t = run_flip(&g, &sigma, &PivotRule::FirstImprovement { order }, &config).unwrap();
            assert_eq!(t.steps, greedy.steps);
        }
        for s in 0..3 {
            let t = run_flip(&g, &sigma, &PivotRule::Random { seed: RngSeed::new(s) }, &config).unwrap();
            assert_eq!(t.steps, greedy.steps);
        }
    }
}

#[test]
fn runs_climb_and_stop_at_true_local_optima() {
    let mut r = rng(7);
    for trial in 0..60 {
        let n = 3 + trial % 10;
        let g = random_graph(&mut r, n, 0.5, 10, trial % 2 == 0);
        let sigma = random_cut(&mut r, n);
        let k = 1 + trial % 3;
        let rule = match trial % 3 {
            0 => PivotRule::Greedy,
            1 => PivotRule::Random { seed: RngSeed::new(trial as u64) },
            _ => PivotRule::FirstImprovement { order: (0..n).rev().collect() },
        };
        let trace = run_flip(&g, &sigma, &rule, &FlipConfig::new(k, 10_000)).unwrap();
        assert_eq!(trace.terminated, Termination::LocalOpt);
        let mut cut = sigma.clone();
        let mut value = oracle_cut_value(&g, &cut);
        for step in &trace.steps {
            assert!(step.improvement.is_positive());
            cut.flip_all(&step.vertices);
            let next = oracle_cut_value(&g, &cut);
            assert_eq!(&next - &value, step.improvement.to_rational());
            value = next;
        }
        assert_eq!(cut, trace.final_cut);
        assert!(value <= oracle_max_cut(&g));
        assert!(is_local_optimum(&g, &trace.final_cut, k, 1 << 20).unwrap().optimal);
    }
}

#[test]
fn greedy_three_flip_on_hk_is_fast() {
    for trial in 0..20u64 {
        let k = 1 + (trial as usize % 6);
        let n_k = 8 << (trial as usize % 4);
        let seed = RngSeed::new(trial);
        let inst = sample_weights(&build_hk(k, n_k).unwrap(), &Weight::zero(), &Weight::from_int(1), &seed).unwrap();
        let sigma = sample_cut(&inst, &seed);
        let start = match setup_sequence(&inst, &sigma, SetupMode::Adaptive) {
            Ok(s) => s.final_cut,
            Err(_) => sigma,
        };
        let nv = inst.graph.n_vertices();
        let trace = run_flip(&inst.graph, &start, &PivotRule::Greedy, &FlipConfig::new(3, nv * nv)).unwrap();
        assert_eq!(trace.terminated, Termination::LocalOpt, "k = {k}, n_k = {n_k}");
        assert!(trace.step_count < nv * nv);
        assert!(cut_value(&inst.graph, &trace.final_cut).unwrap() >= cut_value(&inst.graph, &start).unwrap());
    }
}
