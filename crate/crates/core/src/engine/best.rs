//! Exact best-move search for moves of at most three vertices.
//!
//! The improvement of a set is additive over the connected components of the
//! subgraph it induces, so a maximizing set is a union of mutually
//! non-adjacent connected pieces: single vertices, edges, and connected
//! triples (paths and triangles). A piece with negative improvement can be
//! dropped from any set to do strictly better, so combinations only draw on
//! pieces with improvement ≥ 0. Candidate lists are sorted by value, which
//! lets every combination loop stop as soon as its bound falls below the
//! incumbent. Ties are resolved exactly: among maximizers the
//! lexicographically smallest sorted vertex list wins.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::state::LocalState;
use crate::graph::VertexId;

struct Incumbent {
    best: Option<(BigInt, Vec<VertexId>)>,
}

impl Incumbent {
    /// Candidates must reach this value; numerators are integers, so `1` means `> 0`.
    fn threshold(&self) -> BigInt {
        match &self.best {
            Some((v, _)) => v.clone(),
            None => BigInt::one(),
        }
    }

    fn offer(&mut self, value: BigInt, mut set: Vec<VertexId>) {
        if !value.is_positive() {
            return;
        }
        set.sort_unstable();
        let better = match &self.best {
            None => true,
            Some((bv, bs)) => value > *bv || (value == *bv && set < *bs),
        };
        if better {
            self.best = Some((value, set));
        }
    }
}

/// Best improving move of size at most `k ≤ 3`, or `None` at a `k`-local optimum.
pub(crate) fn best_move_small(state: &LocalState<'_>, k: usize) -> Option<(Vec<VertexId>, BigInt)> {
    assert!((1..=3).contains(&k));
    let g = state.graph();
    let adjacent = |u: VertexId, v: VertexId| g.edge_between(u, v).is_some();
    let mut inc = Incumbent { best: None };

    let mut singles: Vec<(BigInt, VertexId)> = (0..g.n_vertices())
        .filter(|&v| !state.gain(v).is_negative())
        .map(|v| (state.gain(v).clone(), v))
        .collect();
    singles.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    if let Some((v, x)) = singles.first() {
        inc.offer(v.clone(), vec![*x]);
    }
    if k == 1 {
        return inc.best.map(|(v, s)| (s, v));
    }

    // Edge pieces.
    let mut pairs: Vec<(BigInt, VertexId, VertexId)> = Vec::new();
    for (idx, e) in g.edges().iter().enumerate() {
        let value: BigInt = state.gain(e.u) + state.gain(e.v) - state.signed_edge(e.u, e.v, idx) * 2;
        if !value.is_negative() {
            pairs.push((value, e.u.min(e.v), e.u.max(e.v)));
        }
    }
    pairs.sort_unstable_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    for (value, u, v) in &pairs {
        if *value < inc.threshold() {
            break;
        }
        inc.offer(value.clone(), vec![*u, *v]);
    }

    // Two non-adjacent singles.
    for i in 0..singles.len() {
        let Some(next) = singles.get(i + 1) else { break };
        if &singles[i].0 + &next.0 < inc.threshold() {
            break;
        }
        for j in i + 1..singles.len() {
            let value = &singles[i].0 + &singles[j].0;
            if value < inc.threshold() {
                break;
            }
            if !adjacent(singles[i].1, singles[j].1) {
                inc.offer(value, vec![singles[i].1, singles[j].1]);
            }
        }
    }
    if k == 2 {
        return inc.best.map(|(v, s)| (s, v));
    }

    // Paths a–c–b with a, b non-adjacent.
    let mut scored: Vec<(BigInt, VertexId)> = Vec::new();
    for c in 0..g.n_vertices() {
        if g.degree(c) < 2 {
            continue;
        }
        scored.clear();
        scored.extend(
            g.neighbors(c)
                .iter()
                .map(|&(x, e)| (state.gain(x) - state.signed_edge(c, x, e) * 2, x)),
        );
        scored.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let base = state.gain(c);
        for i in 0..scored.len() - 1 {
            if base + &scored[i].0 + &scored[i + 1].0 < inc.threshold() {
                break;
            }
            for j in i + 1..scored.len() {
                let value = base + &scored[i].0 + &scored[j].0;
                if value < inc.threshold() {
                    break;
                }
                if !adjacent(scored[i].1, scored[j].1) {
                    inc.offer(value, vec![c, scored[i].1, scored[j].1]);
                }
            }
        }
    }

    // Triangles, each visited once as u < v < w.
    for (idx, e) in g.edges().iter().enumerate() {
        let (u, v) = (e.u.min(e.v), e.u.max(e.v));
        for &(w, e_uw) in g.neighbors(u) {
            if w <= v {
                continue;
            }
            if let Some(e_vw) = g.edge_between(v, w) {
                let value = state.gain(u) + state.gain(v) + state.gain(w)
                    - (state.signed_edge(u, v, idx) + state.signed_edge(u, w, e_uw) + state.signed_edge(v, w, e_vw))
                        * 2;
                inc.offer(value, vec![u, v, w]);
            }
        }
    }

    // An edge piece plus a non-adjacent single.
    if let Some((top, _)) = singles.first() {
        for (pv, u, v) in &pairs {
            if pv + top < inc.threshold() {
                break;
            }
            for (sv, x) in &singles {
                let value = pv + sv;
                if value < inc.threshold() {
                    break;
                }
                if x != u && x != v && !adjacent(*x, *u) && !adjacent(*x, *v) {
                    inc.offer(value, vec![*u, *v, *x]);
                }
            }
        }
    }

    // Three mutually non-adjacent singles.
    let n = singles.len();
    for i in 0..n.saturating_sub(2) {
        if &singles[i].0 + &singles[i + 1].0 + &singles[i + 2].0 < inc.threshold() {
            break;
        }
        for j in i + 1..n - 1 {
            if &singles[i].0 + &singles[j].0 + &singles[j + 1].0 < inc.threshold() {
                break;
            }
            if adjacent(singles[i].1, singles[j].1) {
                continue;
            }
            for l in j + 1..n {
                let value = &singles[i].0 + &singles[j].0 + &singles[l].0;
                if value < inc.threshold() {
                    break;
                }
                if !adjacent(singles[l].1, singles[i].1) && !adjacent(singles[l].1, singles[j].1) {
                    inc.offer(value, vec![singles[i].1, singles[j].1, singles[l].1]);
                }
            }
        }
    }

    debug_assert!(inc.best.as_ref().map_or(true, |(v, _)| !v.is_zero()));
    inc.best.map(|(v, s)| (s, v))
}
