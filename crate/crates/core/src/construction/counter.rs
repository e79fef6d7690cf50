//! The binary-counter 3-flip sequence on the centers of `H_k`.
//!
//! From a cut where each center `u ∈ {v_i, w_i}` has improvement close to
//! `3^-(i-1)`, the sequence counts through the states of `v_1..v_k`. Only
//! centers move, and no two centers are adjacent, so moving `u` away from
//! its starting side always changes the cut value by `impr_σ(u)` and moving
//! it back by `-impr_σ(u)`. Every step can therefore be predicted from the
//! improvements at the start, and each prediction is checked against the
//! exact value on the live cut.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::construction::setup::Frame;
use crate::cut::{Cut, FlipSequence};
use crate::engine::LocalState;
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::instance::{HkLayout, Instance};
use crate::weight::{inv_pow3, Rational, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CounterStepKind {
    /// `v_k` alone, or a reset move of a single center.
    Single,
    /// `(u, v_{j+1}, w_{j+1})` with `u` at level `j`.
    Triple { level: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterStep {
    pub vertices: Vec<VertexId>,
    pub kind: CounterStepKind,
    /// Exact improvement on the live cut.
    pub improvement: Weight,
    /// `Σ τ(u)σ(u)·impr_σ(u)` over the moved centers.
    pub predicted: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterCertificate {
    pub sequence: FlipSequence,
    pub steps: Vec<CounterStep>,
    /// Every step has strictly positive improvement.
    pub improving: bool,
    /// Every step matches its prediction from the starting improvements.
    pub identity_ok: bool,
    /// Every triple beats `3^-(j-1) − 2·3^-j − 3·3^-k` (unit frame).
    pub triple_bound_ok: bool,
    pub final_cut: Cut,
}

impl CounterCertificate {
    pub fn passed(&self) -> bool {
        self.improving && self.identity_ok && self.triple_bound_ok
    }
}

fn build(lay: &HkLayout, i: usize, flipped: &mut [bool], out: &mut Vec<(Vec<VertexId>, CounterStepKind)>) {
    let k = lay.k;
    let mv = |set: Vec<VertexId>, kind: CounterStepKind, flipped: &mut [bool], out: &mut Vec<_>| {
        for &c in &set {
            let t = lay.tree_of(c);
            flipped[t] = !flipped[t];
        }
        out.push((set, kind));
    };
    if i == k {
        mv(vec![lay.v(k)], CounterStepKind::Single, flipped, out);
        return;
    }
    build(lay, i + 1, flipped, out);
    for j in i + 1..=k {
        for c in [lay.v(j), lay.w(j)] {
            if !flipped[lay.tree_of(c)] {
                mv(vec![c], CounterStepKind::Single, flipped, out);
            }
        }
    }
    mv(vec![lay.v(i), lay.v(i + 1), lay.w(i + 1)], CounterStepKind::Triple { level: i }, flipped, out);
    for j in i + 1..k {
        mv(vec![lay.w(j), lay.v(j + 1), lay.w(j + 1)], CounterStepKind::Triple { level: j }, flipped, out);
    }
    build(lay, i + 1, flipped, out);
}

/// Centers and step kinds of the counter sequence for the layout `lay`.
pub fn counter_moves(lay: &HkLayout) -> Vec<(Vec<VertexId>, CounterStepKind)> {
    let mut out = Vec::new();
    if lay.k > 0 {
        build(lay, 1, &mut vec![false; lay.n_trees()], &mut out);
    }
    out
}

/// Builds the counter sequence from `sigma` and certifies every step.
///
/// `sigma` must give every center `u` of level `i` an improvement within
/// `3^-k` of `3^-(i-1)` in the unit frame.
pub fn counter_sequence(inst: &Instance, sigma: &Cut) -> Result<CounterCertificate> {
    let frame = Frame::of(inst)?;
    let lay = frame.lay;
    let k = lay.k;
    let g = &inst.graph;
    let p = g.denom_exp();
    let mut state = LocalState::new(g, sigma.clone())?;

    let tolerance = inv_pow3(k as u32);
    let base: Vec<BigInt> = lay.centers().iter().map(|&c| state.gain(c).clone()).collect();
    for (t, &c) in lay.centers().iter().enumerate() {
        let level = t / 2 + 1;
        let deviation = (frame.unit(&base[t], p) - inv_pow3(level as u32 - 1)).abs();
        if deviation >= tolerance {
            return Err(Error::invalid(format!(
                "center {c} (level {level}) is {deviation} away from its target, not below 3^-{k}"
            )));
        }
    }

    let moves = counter_moves(&lay);
    let mut steps = Vec::with_capacity(moves.len());
    let mut sequence = FlipSequence::new(3);
    let (mut improving, mut identity_ok, mut triple_bound_ok) = (true, true, true);
    for (set, kind) in moves {
        let actual = state.improvement_num(&set);
        let predicted: BigInt = set
            .iter()
            .map(|&c| {
                let b = &base[lay.tree_of(c)];
                if state.cut().side(c) == sigma.side(c) {
                    b.clone()
                } else {
                    -b
                }
            })
            .sum();
        improving &= actual.is_positive();
        identity_ok &= actual == predicted;
        if let CounterStepKind::Triple { level } = kind {
            let bound: Rational = inv_pow3(level as u32 - 1) - inv_pow3(level as u32) * BigInt::from(2)
                - inv_pow3(k as u32) * BigInt::from(3);
            triple_bound_ok &= frame.unit(&actual, p) > bound && actual.is_positive();
        }
        state.apply(&set);
        sequence.push(set.clone())?;
        steps.push(CounterStep {
            vertices: set,
            kind,
            improvement: Weight::new(actual, p),
            predicted: Weight::new(predicted, p),
        });
    }
    Ok(CounterCertificate { sequence, steps, improving, identity_ok, triple_bound_ok, final_cut: state.into_cut() })
}
