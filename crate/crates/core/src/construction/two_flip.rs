//! Improving 2-flip sequences over an independent set, and the token
//! argument bounding their length by `|I|²`.
//!
//! With only vertices of an independent set `I` moving, every vertex sees
//! fixed neighbors, so moving `v` from side `s` to `-s` always changes the
//! cut value by `s·h_v` with `h_v = Σ_u σ(u)X_uv`. The search state is just
//! the sides of the vertices of `I`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cut::{Cut, FlipSequence};
use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};
use crate::maxcut::gain_num;
use crate::weight::Weight;

/// Largest independent set the exhaustive search accepts.
pub const TWO_FLIP_MAX: usize = 20;

/// `h_v` for every `v ∈ I`: the improvement of moving `v` off side `+1`.
fn pulls(g: &WeightedGraph, sigma: &Cut, set: &[VertexId]) -> Vec<BigInt> {
    set.iter().map(|&v| gain_num(g, sigma, v) * BigInt::from(sigma.side(v))).collect()
}

fn check_set(g: &WeightedGraph, sigma: &Cut, set: &[VertexId]) -> Result<()> {
    sigma.check_len(g.n_vertices())?;
    if set.iter().any(|&v| v >= g.n_vertices()) {
        return Err(Error::invalid("vertex id out of range"));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != set.len() {
        return Err(Error::invalid("vertex set has duplicates"));
    }
    if !g.is_independent(set) {
        return Err(Error::invalid("vertex set is not independent"));
    }
    Ok(())
}

/// Moves over positions of `I`: singletons, then pairs in lexicographic order.
fn moves(len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..len).map(|i| vec![i]).collect();
    for i in 0..len {
        for j in i + 1..len {
            out.push(vec![i, j]);
        }
    }
    out
}

/// Longest improving 2-flip sequence from `sigma` that moves only vertices
/// of the independent set `set`, with a witness. Among longest sequences the
/// first in move order (singletons before pairs, then lexicographic) is returned.
pub fn two_flip_longest(g: &WeightedGraph, sigma: &Cut, set: &[VertexId]) -> Result<(usize, FlipSequence)> {
    check_set(g, sigma, set)?;
    if set.len() > TWO_FLIP_MAX {
        return Err(Error::resource(format!("two-flip search handles at most {TWO_FLIP_MAX} vertices")));
    }
    let h = pulls(g, sigma, set);
    let all = moves(set.len());
    // Bit i set: vertex set[i] is on side -1.
    let start: u32 = set.iter().enumerate().filter(|(_, &v)| sigma.side(v) < 0).map(|(i, _)| 1 << i).sum();
    let value = |state: u32, m: &[usize]| -> BigInt {
        m.iter().map(|&i| if state >> i & 1 == 0 { h[i].clone() } else { -&h[i] }).sum()
    };

    // Longest path in the acyclic improving-move graph, memoized per state.
    let mut memo: HashMap<u32, (usize, Option<usize>)> = HashMap::new();
    fn longest(
        state: u32,
        all: &[Vec<usize>],
        value: &dyn Fn(u32, &[usize]) -> BigInt,
        memo: &mut HashMap<u32, (usize, Option<usize>)>,
    ) -> usize {
        if let Some(&(len, _)) = memo.get(&state) {
            return len;
        }
        let mut best = (0usize, None);
        for (idx, m) in all.iter().enumerate() {
            if value(state, m).is_positive() {
                let next = m.iter().fold(state, |s, &i| s ^ (1 << i));
                let len = 1 + longest(next, all, value, memo);
                if len > best.0 {
                    best = (len, Some(idx));
                }
            }
        }
        memo.insert(state, best);
        best.0
    }
    let length = longest(start, &all, &value, &mut memo);

    let mut seq = FlipSequence::new(2);
    let mut state = start;
    while let Some(&(_, Some(idx))) = memo.get(&state) {
        let m = &all[idx];
        seq.push(m.iter().map(|&i| set[i]).collect())?;
        state = m.iter().fold(state, |s, &i| s ^ (1 << i));
    }
    debug_assert_eq!(seq.len(), length);
    Ok((length, seq))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TokenStep {
    /// Every moved vertex left its preferred side and lost its token.
    Removed { vertices: Vec<VertexId> },
    /// A token passed from `from` to the later vertex `to`.
    Moved { from: VertexId, to: VertexId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TokenCertificate {
    /// Vertices of `I` by `Δ` descending, ties by id.
    pub ordering: Vec<VertexId>,
    /// `Δ_v = |h_v|`, the size of any single move of `v`.
    pub delta: Vec<Weight>,
    /// `s_v`, the side `v` improves by leaving. For `Δ_v = 0` it is `σ(v)`.
    pub preferred_side: Vec<i8>,
    pub initial_tokens: usize,
    pub trace: Vec<TokenStep>,
    pub removed: usize,
    pub moved: usize,
    /// Step index and reason if some step does not fit the argument.
    pub failure: Option<(usize, String)>,
}

impl TokenCertificate {
    pub fn valid(&self) -> bool {
        let k = self.ordering.len();
        self.failure.is_none()
            && self.removed <= self.initial_tokens
            && self.initial_tokens <= k
            && self.moved <= self.initial_tokens * k.saturating_sub(1)
            && self.trace.len() <= k * k
    }
}

/// Replays `seq` and labels every step with its token movement.
pub fn token_certificate(
    g: &WeightedGraph,
    sigma: &Cut,
    set: &[VertexId],
    seq: &FlipSequence,
) -> Result<TokenCertificate> {
    check_set(g, sigma, set)?;
    let pos: HashMap<VertexId, usize> = set.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    for step in seq.steps() {
        if step.len() > 2 || step.iter().any(|v| !pos.contains_key(v)) {
            return Err(Error::invalid("sequence must move at most two vertices of the set per step"));
        }
    }
    let h = pulls(g, sigma, set);
    let preferred: Vec<i8> = h
        .iter()
        .zip(set)
        .map(|(hv, &v)| if hv.is_zero() { sigma.side(v) } else if hv.is_positive() { 1 } else { -1 })
        .collect();
    let mut order: Vec<usize> = (0..set.len()).collect();
    order.sort_by(|&a, &b| h[b].abs().cmp(&h[a].abs()).then(set[a].cmp(&set[b])));
    let rank: Vec<usize> = {
        let mut r = vec![0; set.len()];
        for (k, &i) in order.iter().enumerate() {
            r[i] = k;
        }
        r
    };

    let mut side: Vec<i8> = set.iter().map(|&v| sigma.side(v)).collect();
    let mut token: Vec<bool> = (0..set.len()).map(|i| side[i] == preferred[i]).collect();
    let initial_tokens = token.iter().filter(|&&t| t).count();
    let (mut removed, mut moved) = (0, 0);
    let mut trace = Vec::with_capacity(seq.len());
    let mut failure = None;

    for (t, step) in seq.steps().iter().enumerate() {
        let idx: Vec<usize> = step.iter().map(|v| pos[v]).collect();
        let change: BigInt = idx.iter().map(|&i| &h[i] * BigInt::from(side[i])).sum();
        if !change.is_positive() {
            failure = Some((t, "step is not improving".to_string()));
            break;
        }
        let leaving: Vec<usize> = idx.iter().copied().filter(|&i| side[i] == preferred[i]).collect();
        let entering: Vec<usize> = idx.iter().copied().filter(|&i| side[i] != preferred[i]).collect();
        let label = match (leaving.as_slice(), entering.as_slice()) {
            (l, []) if l.iter().all(|&i| token[i]) => {
                for &i in l {
                    token[i] = false;
                }
                removed += l.len();
                Ok(TokenStep::Removed { vertices: l.iter().map(|&i| set[i]).collect() })
            }
            (&[from], &[to]) if token[from] && !token[to] && rank[from] < rank[to] => {
                token[from] = false;
                token[to] = true;
                moved += 1;
                Ok(TokenStep::Moved { from: set[from], to: set[to] })
            }
            _ => Err("step does not remove or pass a token forward"),
        };
        match label {
            Ok(l) => trace.push(l),
            Err(why) => {
                failure = Some((t, why.to_string()));
                break;
            }
        }
        for &i in &idx {
            side[i] = -side[i];
        }
    }

    let p = g.denom_exp();
    Ok(TokenCertificate {
        ordering: order.iter().map(|&i| set[i]).collect(),
        delta: order.iter().map(|&i| Weight::new(h[i].abs(), p)).collect(),
        preferred_side: order.iter().map(|&i| preferred[i]).collect(),
        initial_tokens,
        trace,
        removed,
        moved,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(weights: [i64; 3]) -> WeightedGraph {
        WeightedGraph::new(4, weights.iter().enumerate().map(|(i, &w)| (0, i + 1, Weight::from_int(w)))).unwrap()
    }

    #[test]
    fn empty_set_has_length_zero() {
        let g = star([1, 2, 3]);
        let (len, seq) = two_flip_longest(&g, &Cut::uniform(4, 1), &[]).unwrap();
        assert_eq!(len, 0);
        assert!(seq.is_empty());
    }

    #[test]
    fn star_leaves_with_equal_weights_move_once_each() {
        let g = star([1, 1, 1]);
        let sigma = Cut::uniform(4, 1);
        let (len, seq) = two_flip_longest(&g, &sigma, &[1, 2, 3]).unwrap();
        assert_eq!(len, 3);
        let cert = token_certificate(&g, &sigma, &[1, 2, 3], &seq).unwrap();
        assert!(cert.valid(), "{cert:?}");
        assert_eq!(cert.initial_tokens, 3);
    }

    #[test]
    fn distinct_weights_pass_tokens_forward() {
        let g = star([1, 2, 3]);
        let sigma = Cut::uniform(4, 1);
        let (len, seq) = two_flip_longest(&g, &sigma, &[1, 2, 3]).unwrap();
        assert!(len > 3 && len <= 9);
        let cert = token_certificate(&g, &sigma, &[1, 2, 3], &seq).unwrap();
        assert!(cert.valid(), "{cert:?}");
        assert!(cert.trace.iter().any(|s| matches!(s, TokenStep::Moved { .. })));
    }

    #[test]
    fn rejects_dependent_sets() {
        let g = star([1, 1, 1]);
        assert!(two_flip_longest(&g, &Cut::uniform(4, 1), &[0, 1]).is_err());
    }

    #[test]
    fn single_move_removes_a_token() {
        let g = star([1, 1, 1]);
        let sigma = Cut::uniform(4, 1);
        let cert = token_certificate(&g, &sigma, &[1], &FlipSequence::singletons([1])).unwrap();
        assert_eq!(cert.trace, vec![TokenStep::Removed { vertices: vec![1] }]);
    }
}
