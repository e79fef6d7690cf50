//! The setup phase on `H_k`: flip freely movable star leaves so that every
//! center `u ∈ {v_i, w_i}` ends with improvement within `3^-k` of `3^-(i-1)`.
//!
//! All targets are expressed in the unit frame, where the sampling interval
//! has length one. Instead of rescaling the weights, targets and tolerances
//! are multiplied by `b − a`, which keeps the graph dyadic. With weights on
//! `[a, b]` a leaf `s` is free to move when
//!
//! * `a + b ≥ 0`: `s` and both pendants share a side and the pendant weights sum above `b`;
//! * `a + b < 0`: both pendants sit opposite `s` and the pendant weights sum below `a`.
//!
//! Either way the pendant terms outweigh any center edge, so flipping `s` is
//! improving no matter where the center is.
//!
//! When those leaves cannot reach a target, adaptive mode also uses every
//! other leaf whose flip is improving from the starting cut. Centers stay
//! put during setup, so such a leaf can be left alone or flipped once.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cut::{Cut, FlipSequence};
use crate::engine::LocalState;
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::instance::{HkLayout, Instance};
use crate::signs::best_signs;
use crate::weight::{inv_pow3, Rational, Weight};

/// Polishing passes for the heuristic sign solver.
const HEURISTIC_EFFORT: usize = 2;
/// Values re-solved exactly after the heuristic.
const EXACT_WINDOW: usize = 28;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetupMode {
    /// Sign-solve over every free leaf of the center, widening to all
    /// improving leaves when the free ones fall short.
    #[default]
    Adaptive,
    /// Follow the proof: balance the ±1 count with most free leaves and
    /// sign-solve only over `2⌊n_k/128⌋` of them.
    Faithful,
}

impl std::str::FromStr for SetupMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "adaptive" => Ok(SetupMode::Adaptive),
            "faithful" => Ok(SetupMode::Faithful),
            _ => Err(Error::invalid(format!("unknown setup mode `{s}` (expected adaptive or faithful)"))),
        }
    }
}

/// How the center's improvement was tuned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSetup {
    pub center: VertexId,
    pub level: usize,
    /// Free star leaves `S_u`.
    pub free: Vec<VertexId>,
    /// `D_u = Σ_{s ∉ S_u} σ(u)σ(s)`.
    pub d: i64,
    /// Leaves whose signs were solved for (`T_u`; all of `S_u` in adaptive mode).
    pub solved: Vec<VertexId>,
    /// Leaves outside `S_u` that adaptive mode had to add to reach the target.
    pub extended: Vec<VertexId>,
    /// Chosen `a_us` for every solved or balanced leaf.
    pub signs: BTreeMap<VertexId, i8>,
    /// `Δ_u`: the part of the improvement not under the solver's control.
    pub delta: Weight,
    /// `3^-(i-1)` in the unit frame.
    pub target: Rational,
    /// Improvement of the center after setup, unit frame.
    pub achieved: Rational,
    /// `|achieved − target|`, unit frame.
    pub deviation: Rational,
    pub ok: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetupResult {
    /// Centers in the order `v_1, w_1, v_2, w_2, …`.
    pub targets: Vec<TargetSetup>,
    pub sequence: FlipSequence,
    pub final_cut: Cut,
    pub all_ok: bool,
    /// `b − a`: one unit of the unit frame in graph weights.
    pub scale: Weight,
}

/// The unit-frame view of a sampled `H_k` instance.
pub(crate) struct Frame {
    pub lay: HkLayout,
    pub lo: Weight,
    pub hi: Weight,
    pub scale: Weight,
}

impl Frame {
    pub fn of(inst: &Instance) -> Result<Frame> {
        let lay = inst.hk_layout().ok_or_else(|| Error::invalid("setup needs an H_k instance"))?;
        let (lo, hi) = inst.interval.clone().ok_or_else(|| Error::invalid("H_k weights have not been sampled"))?;
        let scale = &hi - &lo;
        if !scale.is_positive() {
            return Err(Error::invalid("sampling interval is empty"));
        }
        Ok(Frame { lay, lo, hi, scale })
    }

    /// A graph-weight numerator as a unit-frame rational.
    pub fn unit(&self, num: &BigInt, exp: u32) -> Rational {
        Weight::new(num.clone(), exp).to_rational() / self.scale.to_rational()
    }
}

fn edge_num(state: &LocalState<'_>, u: VertexId, v: VertexId) -> BigInt {
    let g = state.graph();
    let e = g.edge_between(u, v).expect("tree edge exists");
    g.edges()[e].num.clone()
}

/// Whether leaf `j` of `tree` can flip profitably regardless of its center,
/// and its slack over the threshold (as a graph-weight numerator).
fn free_leaf(state: &LocalState<'_>, frame: &Frame, tree: usize, j: usize) -> Option<BigInt> {
    let g = state.graph();
    let p = g.denom_exp();
    let s = frame.lay.leaf(tree, j);
    let [p1, p2] = frame.lay.pendants(tree, j);
    let sum = edge_num(state, s, p1) + edge_num(state, s, p2);
    let cut = state.cut();
    if !(&frame.lo + &frame.hi).is_negative() {
        let slack = sum - frame.hi.scaled_numerator(p);
        (cut.side(p1) == cut.side(s) && cut.side(p2) == cut.side(s) && slack.is_positive()).then_some(slack)
    } else {
        let slack = frame.lo.scaled_numerator(p) - sum;
        (cut.side(p1) != cut.side(s) && cut.side(p2) != cut.side(s) && slack.is_positive()).then_some(slack)
    }
}

struct Plan {
    signs: BTreeMap<VertexId, i8>,
    solved: Vec<VertexId>,
    extended: Vec<VertexId>,
    d: i64,
    delta: BigInt,
    reason: Option<String>,
}

/// Chooses signs for one center, or gives a reason the proof's construction
/// is infeasible.
fn plan_center(
    state: &LocalState<'_>,
    frame: &Frame,
    tree: usize,
    free: &[(VertexId, BigInt)],
    mode: SetupMode,
    target: &Rational,
    tolerance: &Rational,
) -> Plan {
    let g = state.graph();
    let p = g.denom_exp();
    let u = frame.lay.center(tree);
    let cut = state.cut();
    let rel = |s: VertexId| (cut.side(u) * cut.side(s)) as i64;
    let is_free: HashSet<VertexId> = free.iter().map(|(s, _)| *s).collect();
    let leaves: Vec<VertexId> = (0..frame.lay.leaves_per_tree()).map(|j| frame.lay.leaf(tree, j)).collect();
    let signed = |s: VertexId| {
        let x = edge_num(state, u, s);
        if rel(s) > 0 {
            x
        } else {
            -x
        }
    };

    let mut d = 0i64;
    let mut fixed = BigInt::zero();
    for &s in leaves.iter().filter(|s| !is_free.contains(s)) {
        d += rel(s);
        fixed += signed(s);
    }

    let solve = |solved: &[VertexId], delta: &BigInt| {
        let weights: Vec<Weight> = solved.iter().map(|&s| Weight::new(edge_num(state, u, s), p)).collect();
        let goal = target * frame.scale.to_rational() - Weight::new(delta.clone(), p).to_rational();
        best_signs(&goal, &weights, HEURISTIC_EFFORT, EXACT_WINDOW)
    };
    let mut signs = BTreeMap::new();
    match mode {
        SetupMode::Adaptive => {
            let mut solved: Vec<VertexId> = free.iter().map(|(s, _)| *s).collect();
            let mut assignment = solve(&solved, &fixed);
            let mut delta = fixed;
            let mut extended = Vec::new();
            if assignment.error >= tolerance * frame.scale.to_rational() {
                extended = leaves.iter().copied().filter(|s| !is_free.contains(s) && state.gain(*s).is_positive()).collect();
                if !extended.is_empty() {
                    let wider: Vec<VertexId> = solved.iter().chain(&extended).copied().collect();
                    let rest: BigInt = extended.iter().map(|&s| signed(s)).sum();
                    let wider_delta = &delta - rest;
                    let retry = solve(&wider, &wider_delta);
                    if retry.error < assignment.error {
                        (solved, assignment, delta) = (wider, retry, wider_delta);
                    } else {
                        extended.clear();
                    }
                }
            }
            signs.extend(solved.iter().copied().zip(assignment.signs));
            Plan { signs, solved, extended, d, delta, reason: None }
        }
        SetupMode::Faithful => {
            let m = frame.lay.n_k / 128;
            if free.len() < 2 * m {
                let why = format!("only {} free leaves, need 2m = {}", free.len(), 2 * m);
                return Plan { signs, solved: Vec::new(), extended: Vec::new(), d, delta: fixed, reason: Some(why) };
            }
            // Largest slack first, ties by id.
            let mut by_slack: Vec<&(VertexId, BigInt)> = free.iter().collect();
            by_slack.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            let t_u: Vec<VertexId> = by_slack[..2 * m].iter().map(|(s, _)| *s).collect();
            let mut rest: Vec<VertexId> = by_slack[2 * m..].iter().map(|(s, _)| *s).collect();
            rest.sort_unstable();
            let mut delta = fixed;
            let mut reason = None;
            if (d.unsigned_abs() as usize) > rest.len() || (rest.len() as i64 - d).rem_euclid(2) != 0 {
                reason = Some(format!("cannot balance D_u = {d} with {} leaves", rest.len()));
            }
            // Cancel D_u first, then alternate so the remainder sums to zero.
            let mut balance = d;
            for (idx, &s) in rest.iter().enumerate() {
                let a = if balance != 0 {
                    -balance.signum()
                } else if idx % 2 == 0 {
                    1
                } else {
                    -1
                };
                balance += a;
                signs.insert(s, a as i8);
                let x = edge_num(state, u, s);
                delta += if a > 0 { x } else { -x };
            }
            let assignment = solve(&t_u, &delta);
            signs.extend(t_u.iter().copied().zip(assignment.signs));
            Plan { signs, solved: t_u, extended: Vec::new(), d, delta, reason }
        }
    }
}

/// Builds the setup sequence from `sigma` and reports how close every
/// center lands to its target.
pub fn setup_sequence(inst: &Instance, sigma: &Cut, mode: SetupMode) -> Result<SetupResult> {
    let frame = Frame::of(inst)?;
    let g = &inst.graph;
    let p = g.denom_exp();
    let k = frame.lay.k;
    let mut state = LocalState::new(g, sigma.clone())?;
    let tolerance = inv_pow3(k as u32);
    let mut plans = Vec::with_capacity(frame.lay.n_trees());
    let mut sequence = FlipSequence::new(1);

    for tree in 0..frame.lay.n_trees() {
        let free: Vec<(VertexId, BigInt)> = (0..frame.lay.leaves_per_tree())
            .filter_map(|j| free_leaf(&state, &frame, tree, j).map(|slack| (frame.lay.leaf(tree, j), slack)))
            .collect();
        let level = tree / 2 + 1;
        let target = inv_pow3(level as u32 - 1);
        let plan = plan_center(&state, &frame, tree, &free, mode, &target, &tolerance);
        plans.push((tree, free, plan, target));
    }

    // Every move is checked against the live cut: a leaf's gain depends only
    // on its center and pendants, none of which move here.
    for (tree, _, plan, _) in &plans {
        let u = frame.lay.center(*tree);
        for (&s, &a) in &plan.signs {
            if state.cut().side(u) * state.cut().side(s) != a {
                if !state.gain(s).is_positive() {
                    return Err(Error::Verification(format!("setup move of leaf {s} is not improving")));
                }
                state.flip(s);
                sequence.push(vec![s])?;
            }
        }
    }

    let mut targets = Vec::with_capacity(plans.len());
    for (tree, free, plan, target) in plans {
        let Plan { signs, solved, extended, d, delta, reason } = plan;
        let u = frame.lay.center(tree);
        let achieved = frame.unit(state.gain(u), p);
        let deviation = (&achieved - &target).abs();
        let close = deviation < tolerance;
        let reason = reason.or_else(|| (!close).then(|| format!("deviation {deviation} is not below 3^-{k}")));
        targets.push(TargetSetup {
            center: u,
            level: tree / 2 + 1,
            free: free.into_iter().map(|(s, _)| s).collect(),
            d,
            solved,
            extended,
            signs,
            delta: Weight::new(delta, p),
            target,
            achieved,
            deviation,
            ok: close && reason.is_none(),
            reason,
        });
    }
    let all_ok = targets.iter().all(|t| t.ok);
    Ok(SetupResult { targets, sequence, final_cut: state.into_cut(), all_ok, scale: frame.scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{build_hk, sample_cut, sample_weights};
    use crate::maxcut::{improvement, is_improving};
    use crate::rng::RngSeed;

    fn sampled(k: usize, n_k: usize, a: i64, b: i64, seed: u64) -> (Instance, Cut) {
        let seed = RngSeed::new(seed);
        let inst = sample_weights(&build_hk(k, n_k).unwrap(), &Weight::from_int(a), &Weight::from_int(b), &seed).unwrap();
        let cut = sample_cut(&inst, &seed);
        (inst, cut)
    }

    #[test]
    fn adaptive_setup_moves_are_improving_and_hit_targets() {
        let (inst, cut) = sampled(3, 40, 0, 1, 1);
        let res = setup_sequence(&inst, &cut, SetupMode::Adaptive).unwrap();
        assert!(is_improving(&inst.graph, &cut, &res.sequence).unwrap().ok);
        for t in &res.targets {
            let recomputed = improvement(&inst.graph, &res.final_cut, &[t.center]).unwrap();
            assert_eq!(recomputed.to_rational(), &t.achieved * res.scale.to_rational());
        }
    }

    #[test]
    fn negative_interval_uses_the_mirrored_event() {
        let (inst, cut) = sampled(2, 40, -3, 1, 5);
        let res = setup_sequence(&inst, &cut, SetupMode::Adaptive).unwrap();
        assert!(!res.sequence.is_empty());
        assert!(is_improving(&inst.graph, &cut, &res.sequence).unwrap().ok);
    }

    #[test]
    fn faithful_mode_needs_large_trees() {
        let (inst, cut) = sampled(2, 40, 0, 1, 2);
        // m = 0, so the solver has nothing to work with.
        let res = setup_sequence(&inst, &cut, SetupMode::Faithful).unwrap();
        assert!(res.targets.iter().all(|t| t.solved.is_empty()));
    }

    #[test]
    fn requires_sampled_hk() {
        let inst = build_hk(1, 2).unwrap();
        let cut = Cut::uniform(inst.graph.n_vertices(), 1);
        assert!(setup_sequence(&inst, &cut, SetupMode::Adaptive).is_err());
    }
}
