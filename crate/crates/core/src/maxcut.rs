//! Cut values, move improvements and the improving / local-optimum checks.
//!
//! With `σ` a cut and `X` the edge weights, the value of `σ` is the total
//! weight of crossing edges, and the improvement of flipping a single vertex
//! is `Σ_{u ∈ N(v)} σ(u)σ(v)X_uv`. For a set `S` the single-vertex terms are
//! summed and every edge inside `S` is corrected for, since such an edge keeps
//! its crossing status when both ends move.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::cut::{Cut, FlipSequence};
use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};
use crate::weight::Weight;

pub fn cut_value(g: &WeightedGraph, sigma: &Cut) -> Result<Weight> {
    sigma.check_len(g.n_vertices())?;
    Ok(Weight::new(cut_value_num(g, sigma), g.denom_exp()))
}

pub(crate) fn cut_value_num(g: &WeightedGraph, sigma: &Cut) -> BigInt {
    let mut total = BigInt::zero();
    for e in g.edges() {
        if sigma.side(e.u) != sigma.side(e.v) {
            total += &e.num;
        }
    }
    total
}

/// Single-vertex improvement numerator over `2^denom_exp`.
pub(crate) fn gain_num(g: &WeightedGraph, sigma: &Cut, v: VertexId) -> BigInt {
    let sv = sigma.side(v);
    let mut total = BigInt::zero();
    for &(u, e) in g.neighbors(v) {
        if sigma.side(u) == sv {
            total += &g.edges()[e].num;
        } else {
            total -= &g.edges()[e].num;
        }
    }
    total
}

pub(crate) fn set_improvement_num(g: &WeightedGraph, sigma: &Cut, set: &[VertexId]) -> BigInt {
    let mut total = BigInt::zero();
    for (i, &v) in set.iter().enumerate() {
        total += gain_num(g, sigma, v);
        for &u in &set[i + 1..] {
            if let Some(e) = g.edge_between(u, v) {
                let num = &g.edges()[e].num;
                // Counted once from each endpoint above, but its status does not change.
                if sigma.side(u) == sigma.side(v) {
                    total -= num * 2;
                } else {
                    total += num * 2;
                }
            }
        }
    }
    total
}

fn check_set(g: &WeightedGraph, set: &[VertexId]) -> Result<()> {
    if set.is_empty() {
        return Err(Error::invalid("move set is empty"));
    }
    for (i, &v) in set.iter().enumerate() {
        if v >= g.n_vertices() {
            return Err(Error::invalid(format!("unknown vertex {v}")));
        }
        if set[..i].contains(&v) {
            return Err(Error::invalid(format!("vertex {v} appears twice in the move set")));
        }
    }
    Ok(())
}

/// `v(σ^S) − v(σ)` for flipping every vertex of `set`.
pub fn improvement(g: &WeightedGraph, sigma: &Cut, set: &[VertexId]) -> Result<Weight> {
    sigma.check_len(g.n_vertices())?;
    check_set(g, set)?;
    Ok(Weight::new(set_improvement_num(g, sigma, set), g.denom_exp()))
}

/// Flips every vertex that occurs an odd number of times in `seq`.
pub fn apply_sequence(sigma: &Cut, seq: &FlipSequence) -> Result<Cut> {
    seq.check_vertices(sigma.len())?;
    let mut out = sigma.clone();
    for (v, count) in seq.occurrences(sigma.len()).into_iter().enumerate() {
        if count % 2 == 1 {
            out.flip(v);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImprovingCheck {
    pub ok: bool,
    /// First step whose improvement is not strictly positive.
    pub failing_step: Option<usize>,
    pub improvements: Vec<Weight>,
}

/// Replays `seq` from `sigma`, recording each step's exact improvement.
pub fn is_improving(g: &WeightedGraph, sigma: &Cut, seq: &FlipSequence) -> Result<ImprovingCheck> {
    sigma.check_len(g.n_vertices())?;
    seq.check_vertices(g.n_vertices())?;
    let mut cut = sigma.clone();
    let mut improvements = Vec::with_capacity(seq.len());
    let mut failing_step = None;
    for (i, step) in seq.steps().iter().enumerate() {
        let w = Weight::new(set_improvement_num(g, &cut, step), g.denom_exp());
        if failing_step.is_none() && !w.is_positive() {
            failing_step = Some(i);
        }
        improvements.push(w);
        cut.flip_all(step);
    }
    Ok(ImprovingCheck { ok: failing_step.is_none(), failing_step, improvements })
}

/// `Σ_{j=1..k} C(n, j)`, saturating.
pub fn subset_count(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for j in 1..=k.min(n) {
        binom = binom.saturating_mul((n + 1 - j) as u128) / j as u128;
        total = total.saturating_add(binom);
    }
    total
}

/// Visits every subset of `0..n` of size `1..=k`, by size and then
/// lexicographically. Stops early when `f` breaks.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> ControlFlow<()>) {
    let mut buf = Vec::with_capacity(k);
    for size in 1..=k.min(n) {
        if visit_combinations(n, size, 0, &mut buf, &mut f).is_break() {
            return;
        }
    }
}

fn visit_combinations(
    n: usize,
    size: usize,
    start: usize,
    buf: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if buf.len() == size {
        return f(buf);
    }
    let remaining = size - buf.len();
    for i in start..=n - remaining {
        buf.push(i);
        let flow = visit_combinations(n, size, i + 1, buf, f);
        buf.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

pub(crate) fn check_enumeration_budget(n: usize, k: usize, budget: u128) -> Result<()> {
    let count = subset_count(n, k);
    if count > budget {
        return Err(Error::resource(format!(
            "enumerating {count} subsets of size <= {k} over {n} vertices exceeds the budget of {budget}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalOptimumCheck {
    pub optimal: bool,
    /// A maximally improving set (lexicographically smallest among ties) and its improvement.
    pub witness: Option<(Vec<VertexId>, Weight)>,
}

/// Exhaustive check that no set of at most `k` vertices improves `sigma`.
pub fn is_local_optimum(g: &WeightedGraph, sigma: &Cut, k: usize, budget: u128) -> Result<LocalOptimumCheck> {
    sigma.check_len(g.n_vertices())?;
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    check_enumeration_budget(g.n_vertices(), k, budget)?;
    let mut best: Option<(BigInt, Vec<VertexId>)> = None;
    for_each_subset(g.n_vertices(), k, |set| {
        let value = set_improvement_num(g, sigma, set);
        if value > BigInt::zero() {
            let better = match &best {
                None => true,
                Some((bv, bs)) => value > *bv || (value == *bv && set < bs.as_slice()),
            };
            if better {
                best = Some((value, set.to_vec()));
            }
        }
        ControlFlow::Continue(())
    });
    Ok(LocalOptimumCheck {
        optimal: best.is_none(),
        witness: best.map(|(v, s)| (s, Weight::new(v, g.denom_exp()))),
    })
}
