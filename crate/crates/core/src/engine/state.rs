use num_bigint::BigInt;
use num_traits::Zero;

use crate::cut::Cut;
use crate::error::Result;
use crate::graph::{VertexId, WeightedGraph};
use crate::maxcut;
use crate::weight::Weight;

/// A cut together with the single-vertex improvement of every vertex,
/// updated in `O(deg)` per flip. Gains are numerators over the graph's
/// shared denominator.
#[derive(Clone, Debug)]
pub struct LocalState<'g> {
    graph: &'g WeightedGraph,
    cut: Cut,
    gains: Vec<BigInt>,
}

impl<'g> LocalState<'g> {
    pub fn new(graph: &'g WeightedGraph, cut: Cut) -> Result<Self> {
        cut.check_len(graph.n_vertices())?;
        let gains = (0..graph.n_vertices()).map(|v| maxcut::gain_num(graph, &cut, v)).collect();
        Ok(LocalState { graph, cut, gains })
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    pub fn cut(&self) -> &Cut {
        &self.cut
    }

    pub fn into_cut(self) -> Cut {
        self.cut
    }

    pub fn gain(&self, v: VertexId) -> &BigInt {
        &self.gains[v]
    }

    pub fn gain_weight(&self, v: VertexId) -> Weight {
        Weight::new(self.gains[v].clone(), self.graph.denom_exp())
    }

    /// `σ(u)σ(v)·X_uv` for the edge with index `edge` between `u` and `v`.
    pub(crate) fn signed_edge(&self, u: VertexId, v: VertexId, edge: usize) -> BigInt {
        let num = &self.graph.edges()[edge].num;
        if self.cut.side(u) == self.cut.side(v) {
            num.clone()
        } else {
            -num
        }
    }

    /// Improvement numerator of flipping every vertex in `set` (duplicate-free).
    pub fn improvement_num(&self, set: &[VertexId]) -> BigInt {
        let mut total = BigInt::zero();
        for (i, &v) in set.iter().enumerate() {
            total += &self.gains[v];
            for &u in &set[i + 1..] {
                if let Some(e) = self.graph.edge_between(u, v) {
                    total -= self.signed_edge(u, v, e) * 2;
                }
            }
        }
        total
    }

    pub fn flip(&mut self, v: VertexId) {
        let sv = self.cut.side(v);
        for &(u, e) in self.graph.neighbors(v) {
            let num = &self.graph.edges()[e].num;
            // The σ(u)σ(v)X_uv term of u's gain changes sign.
            if self.cut.side(u) == sv {
                self.gains[u] -= num * 2;
            } else {
                self.gains[u] += num * 2;
            }
        }
        let g = std::mem::take(&mut self.gains[v]);
        self.gains[v] = -g;
        self.cut.flip(v);
    }

    pub fn apply(&mut self, set: &[VertexId]) {
        for &v in set {
            self.flip(v);
        }
    }
}
