//! Weighted undirected graphs with a shared power-of-two denominator.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::weight::Weight;

/// Dense vertex index `0..n`.
pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    /// Weight numerator over the graph-wide denominator `2^denom_exp`.
    pub num: BigInt,
}

/// An immutable weighted graph.
///
/// All edge weights share the denominator `2^denom_exp`, with `denom_exp`
/// kept minimal, so two graphs with the same weights compare equal no matter
/// how they were built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    denom_exp: u32,
    edges: Vec<Edge>,
    // Per vertex: (neighbor, edge index), sorted by neighbor.
    adj: Vec<Vec<(VertexId, usize)>>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId, Weight)>) -> Result<Self> {
        let edges: Vec<_> = edges.into_iter().collect();
        let exp = edges.iter().map(|(_, _, w)| w.exponent()).max().unwrap_or(0);
        let scaled = edges
            .into_iter()
            .map(|(u, v, w)| (u, v, w.scaled_numerator(exp)))
            .collect();
        Self::from_scaled(n, exp, scaled)
    }

    /// Builds a graph from numerators over `2^denom_exp`.
    pub fn from_scaled(n: usize, denom_exp: u32, edges: Vec<(VertexId, VertexId, BigInt)>) -> Result<Self> {
        let mut adj: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); n];
        let mut out = Vec::with_capacity(edges.len());
        for (idx, (u, v, num)) in edges.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge {idx} ({u}, {v}) references a vertex outside 0..{n}")));
            }
            if u == v {
                return Err(Error::invalid(format!("edge {idx} is a self-loop on vertex {u}")));
            }
            adj[u].push((v, idx));
            adj[v].push((u, idx));
            out.push(Edge { u, v, num });
        }
        for (vertex, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::invalid(format!("duplicate edge between {vertex} and {}", w[0].0)));
            }
        }
        let mut g = WeightedGraph { n, denom_exp, edges: out, adj };
        g.canonicalize();
        Ok(g)
    }

    fn canonicalize(&mut self) {
        let shift = self
            .edges
            .iter()
            .filter(|e| !e.num.is_zero())
            .map(|e| e.num.trailing_zeros().unwrap_or(0))
            .min()
            .unwrap_or(u64::MAX)
            .min(u64::from(self.denom_exp)) as u32;
        if shift > 0 {
            for e in &mut self.edges {
                e.num >>= shift;
            }
            self.denom_exp -= shift;
        }
    }

    /// Same topology, new weights (one per edge, in edge order).
    pub fn with_weights(&self, weights: &[Weight]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::invalid(format!(
                "expected {} weights, got {}",
                self.edges.len(),
                weights.len()
            )));
        }
        let exp = weights.iter().map(Weight::exponent).max().unwrap_or(0);
        let mut g = WeightedGraph {
            n: self.n,
            denom_exp: exp,
            edges: self
                .edges
                .iter()
                .zip(weights)
                .map(|(e, w)| Edge { u: e.u, v: e.v, num: w.scaled_numerator(exp) })
                .collect(),
            adj: self.adj.clone(),
        };
        g.canonicalize();
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self, edge: usize) -> Weight {
        Weight::new(self.edges[edge].num.clone(), self.denom_exp)
    }

    pub fn weights(&self) -> Vec<Weight> {
        (0..self.edges.len()).map(|i| self.weight(i)).collect()
    }

    /// `(neighbor, edge index)` pairs sorted by neighbor.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    pub fn is_independent(&self, set: &[VertexId]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && self.edge_between(u, v).is_none()))
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &(v, _) in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}
