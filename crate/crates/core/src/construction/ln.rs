//! The long FLIP execution on `G_n` and its certification.

use num_traits::Signed;
use serde::Serialize;

use crate::cut::FlipSequence;
use crate::engine::{explore_executions, LocalState};
use crate::graph::VertexId;
use crate::instance::{build_gn, GnLayout};
use crate::weight::Weight;

/// `6·3^n − 4`.
pub fn ln_length(n: usize) -> u128 {
    6 * 3u128.pow(n as u32) - 4
}

fn push_ln(lay: &GnLayout, m: usize, out: &mut Vec<VertexId>) {
    if m == 0 {
        out.extend([lay.v(0, 1), lay.v(0, 8)]);
        return;
    }
    out.extend([lay.v(m, 1), lay.v(m, 2)]);
    push_ln(lay, m - 1, out);
    out.extend([lay.v(m, 3), lay.v(m, 4)]);
    push_ln(lay, m - 1, out);
    out.extend([lay.v(m, 5), lay.v(m, 6)]);
    push_ln(lay, m - 1, out);
    out.extend([lay.v(m, 7), lay.v(m, 8)]);
}

/// The single-flip sequence `L_n` on `G_n`, in `G_n`'s vertex numbering.
pub fn ln_sequence(n: usize) -> FlipSequence {
    let mut order = Vec::with_capacity(ln_length(n).min(1 << 24) as usize);
    push_ln(&GnLayout { n }, n, &mut order);
    FlipSequence::singletons(order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GnViolationKind {
    /// The step of `L_n` does not increase the cut value.
    NotImproving,
    /// Some other single flip also improves at this step.
    NotUnique,
    /// The final cut still has an improving single flip.
    NotLocalOptimum,
    /// The sequence length differs from `6·3^n − 4`.
    WrongLength,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GnViolation {
    pub step: usize,
    pub kind: GnViolationKind,
    pub vertices: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GnReport {
    pub n: usize,
    pub expected_length: u128,
    pub length: usize,
    /// False when the step budget stopped the check early.
    pub complete: bool,
    pub improving: bool,
    pub unique_moves: bool,
    pub local_optimum: bool,
    pub length_ok: bool,
    /// For `n ≤ 1`: whether the exhaustive search found `L_n` as the only maximal execution.
    pub exhaustive_unique: Option<bool>,
    pub violations: Vec<GnViolation>,
    /// Sum of all step improvements.
    pub total_improvement: Weight,
}

impl GnReport {
    pub fn passed(&self) -> bool {
        self.complete
            && self.improving
            && self.unique_moves
            && self.local_optimum
            && self.length_ok
            && self.exhaustive_unique != Some(false)
    }
}

/// Violations beyond this count are not recorded individually.
const MAX_VIOLATIONS: usize = 100;

/// Replays `L_n` on `G_n` from its designated cut and checks that each step
/// improves, that it is the only improving single flip at its time, that the
/// end is a local optimum, and the length. At most `step_budget` steps are
/// replayed.
pub fn verify_gn(n: usize, step_budget: usize) -> GnReport {
    let inst = build_gn(n);
    let seq = ln_sequence(n);
    let sigma = inst.initial_cut.clone().expect("G_n has a designated cut");
    let mut state = LocalState::new(&inst.graph, sigma.clone()).expect("cut sized for graph");
    let mut violations = Vec::new();
    let mut record = |v: GnViolation| {
        if violations.len() < MAX_VIOLATIONS {
            violations.push(v);
        }
    };
    let (mut improving, mut unique) = (true, true);
    let mut total = num_bigint::BigInt::from(0);
    let complete = seq.len() <= step_budget;

    for (t, step) in seq.steps().iter().take(step_budget).enumerate() {
        let v = step[0];
        let others: Vec<VertexId> =
            (0..inst.graph.n_vertices()).filter(|&u| u != v && state.gain(u).is_positive()).collect();
        if !others.is_empty() {
            unique = false;
            record(GnViolation { step: t, kind: GnViolationKind::NotUnique, vertices: others });
        }
        if !state.gain(v).is_positive() {
            improving = false;
            record(GnViolation { step: t, kind: GnViolationKind::NotImproving, vertices: vec![v] });
        }
        total += state.gain(v);
        state.flip(v);
    }

    let mut local_optimum = false;
    if complete {
        let left: Vec<VertexId> = (0..inst.graph.n_vertices()).filter(|&u| state.gain(u).is_positive()).collect();
        local_optimum = left.is_empty();
        if !local_optimum {
            record(GnViolation { step: seq.len(), kind: GnViolationKind::NotLocalOptimum, vertices: left });
        }
    }
    let length_ok = seq.len() as u128 == ln_length(n);
    if !length_ok {
        record(GnViolation { step: seq.len(), kind: GnViolationKind::WrongLength, vertices: Vec::new() });
    }

    let exhaustive_unique = (n <= 1).then(|| match explore_executions(&inst.graph, &sigma, 1, 1 << 16, 2) {
        Ok(tree) => tree.executions == 1 && tree.witnesses == [seq.clone()],
        Err(_) => false,
    });

    GnReport {
        n,
        expected_length: ln_length(n),
        length: seq.len(),
        complete,
        improving,
        unique_moves: unique,
        local_optimum,
        length_ok,
        exhaustive_unique,
        violations,
        total_improvement: Weight::new(total, inst.graph.denom_exp()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_follow_the_recurrence() {
        let mut expected = 2u128;
        for n in 0..=6 {
            assert_eq!(ln_sequence(n).len() as u128, expected);
            assert_eq!(ln_length(n), expected);
            expected = 3 * expected + 8;
        }
    }

    #[test]
    fn first_levels_pass() {
        for n in 0..=2 {
            let report = verify_gn(n, usize::MAX);
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn small_budget_is_incomplete() {
        let report = verify_gn(2, 10);
        assert!(!report.complete);
        assert!(!report.passed());
    }
}
