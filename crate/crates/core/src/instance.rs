//! Builders for the two hard instance families and seeded samplers for
//! uniform edge weights and uniform cuts.
//!
//! `G_n` is a degree-four graph whose single-flip improving execution from
//! its designated cut is unique and has length `6·3^n − 4`. `H_k` is a
//! disjoint union of `2k` identical trees: a star `K_{1,2n_k}` whose leaves
//! each carry two pendant vertices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cut::Cut;
use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};
use crate::rng::{tag, RngSeed};
use crate::weight::Weight;

/// Bits of the uniform weight grid: samples are `a + j·(b−a)/2^53`, `0 ≤ j ≤ 2^53`.
pub const GRID_BITS: u32 = 53;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Gn { n: usize },
    Hk { k: usize, n_k: usize, connectors: bool },
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: WeightedGraph,
    pub initial_cut: Option<Cut>,
    /// Role label to vertex ids. Every vertex appears under exactly one label.
    pub labels: BTreeMap<String, Vec<VertexId>>,
    pub family: Family,
    /// Sampling interval `[a, b]`, once weights have been drawn.
    pub interval: Option<(Weight, Weight)>,
    pub weight_seed: Option<RngSeed>,
}

impl Instance {
    pub fn custom(graph: WeightedGraph, initial_cut: Option<Cut>) -> Self {
        Instance {
            graph,
            initial_cut,
            labels: BTreeMap::new(),
            family: Family::Custom,
            interval: None,
            weight_seed: None,
        }
    }

    /// The single vertex carrying `label`.
    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        match self.labels.get(label)?.as_slice() {
            [v] => Some(*v),
            _ => None,
        }
    }

    pub fn hk_layout(&self) -> Option<HkLayout> {
        match self.family {
            Family::Hk { k, n_k, .. } => Some(HkLayout { k, n_k }),
            _ => None,
        }
    }
}

/// Vertex numbering of `G_n`: `v_{0,1} = 0`, `v_{0,8} = 1`, then eight
/// consecutive ids per level, then `w_1`, `w_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GnLayout {
    pub n: usize,
}

impl GnLayout {
    /// `v_{m,j}`, with `j ∈ {1, 8}` at level 0 and `j ∈ 1..=8` above.
    pub fn v(&self, m: usize, j: usize) -> VertexId {
        assert!(m <= self.n && (1..=8).contains(&j));
        if m == 0 {
            assert!(j == 1 || j == 8, "level 0 only has v_{{0,1}} and v_{{0,8}}");
            return if j == 1 { 0 } else { 1 };
        }
        2 + 8 * (m - 1) + (j - 1)
    }

    pub fn w1(&self) -> VertexId {
        8 * self.n + 2
    }

    pub fn w2(&self) -> VertexId {
        8 * self.n + 3
    }

    pub fn n_vertices(&self) -> usize {
        8 * self.n + 4
    }
}

pub fn build_gn(n: usize) -> Instance {
    let lay = GnLayout { n };
    let pow8 = |m: usize| num_traits::pow(BigInt::from(8), m);
    let mut edges: Vec<(VertexId, VertexId, BigInt)> = vec![(lay.v(0, 1), lay.v(0, 8), BigInt::from(7))];
    let mut sides = vec![0i8; lay.n_vertices()];
    sides[lay.v(0, 1)] = 1;
    sides[lay.v(0, 8)] = -1;

    for m in 1..=n {
        let scale = pow8(m);
        for j in 1..8 {
            let w = BigInt::from(7 - 2 * (j / 2) as i64) * &scale;
            edges.push((lay.v(m, j), lay.v(m, j + 1), w));
        }
        let start = lay.v(m - 1, 1);
        edges.push((lay.v(m, 2), start, scale.clone()));
        edges.push((lay.v(m, 4), start, -scale.clone()));
        edges.push((lay.v(m, 6), start, scale.clone()));
        let end = lay.v(m - 1, 8);
        edges.push((lay.v(m, 3), end, BigInt::from(1)));
        edges.push((lay.v(m, 5), end, BigInt::from(-1)));
        edges.push((lay.v(m, 7), end, BigInt::from(1)));
        // Alternating path, v_{m,1} on the side of v_{m-1,1}.
        let first = sides[start];
        for j in 1..=8 {
            sides[lay.v(m, j)] = if j % 2 == 1 { first } else { -first };
        }
    }
    let top = lay.v(n, 1);
    edges.push((lay.w1(), top, pow8(n + 1)));
    edges.push((lay.w2(), lay.w1(), pow8(n + 1) * 2));
    sides[lay.w1()] = sides[top];
    sides[lay.w2()] = -sides[top];

    let mut labels = BTreeMap::new();
    labels.insert("v[0][1]".to_string(), vec![lay.v(0, 1)]);
    labels.insert("v[0][8]".to_string(), vec![lay.v(0, 8)]);
    for m in 1..=n {
        for j in 1..=8 {
            labels.insert(format!("v[{m}][{j}]"), vec![lay.v(m, j)]);
        }
    }
    labels.insert("w1".into(), vec![lay.w1()]);
    labels.insert("w2".into(), vec![lay.w2()]);

    Instance {
        graph: WeightedGraph::from_scaled(lay.n_vertices(), 0, edges).expect("G_n construction is well formed"),
        initial_cut: Some(Cut::new(sides).expect("all sides assigned")),
        labels,
        family: Family::Gn { n },
        interval: None,
        weight_seed: None,
    }
}

/// Vertex numbering of `H_k`. Trees are ordered `S^{v_1}, S^{w_1}, S^{v_2}, …`;
/// inside a tree the center comes first, then each star leaf followed by its
/// two pendants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HkLayout {
    pub k: usize,
    pub n_k: usize,
}

impl HkLayout {
    pub fn tree_size(&self) -> usize {
        6 * self.n_k + 1
    }

    pub fn n_trees(&self) -> usize {
        2 * self.k
    }

    pub fn n_vertices(&self) -> usize {
        self.n_trees() * self.tree_size()
    }

    pub fn leaves_per_tree(&self) -> usize {
        2 * self.n_k
    }

    pub fn center(&self, tree: usize) -> VertexId {
        tree * self.tree_size()
    }

    pub fn leaf(&self, tree: usize, j: usize) -> VertexId {
        self.center(tree) + 1 + 3 * j
    }

    pub fn pendants(&self, tree: usize, j: usize) -> [VertexId; 2] {
        let s = self.leaf(tree, j);
        [s + 1, s + 2]
    }

    /// Center `v_i`, `1 ≤ i ≤ k`.
    pub fn v(&self, i: usize) -> VertexId {
        assert!((1..=self.k).contains(&i));
        self.center(2 * (i - 1))
    }

    /// Center `w_i`, `1 ≤ i ≤ k`.
    pub fn w(&self, i: usize) -> VertexId {
        assert!((1..=self.k).contains(&i));
        self.center(2 * (i - 1) + 1)
    }

    pub fn tree_of(&self, v: VertexId) -> usize {
        v / self.tree_size()
    }

    /// Level `i` of a center vertex.
    pub fn level_of_center(&self, v: VertexId) -> Option<usize> {
        (v % self.tree_size() == 0 && v < self.n_vertices()).then(|| self.tree_of(v) / 2 + 1)
    }

    /// All centers in the order `v_1, w_1, v_2, w_2, …`.
    pub fn centers(&self) -> Vec<VertexId> {
        (0..self.n_trees()).map(|t| self.center(t)).collect()
    }
}

pub fn build_hk(k: usize, n_k: usize) -> Result<Instance> {
    build_hk_with(k, n_k, false)
}

/// `H_k`, optionally with connector edges between pendants of consecutive
/// trees so that the graph is connected. Weights start at zero.
pub fn build_hk_with(k: usize, n_k: usize, connectors: bool) -> Result<Instance> {
    if k == 0 || n_k == 0 {
        return Err(Error::invalid("H_k needs k >= 1 and n_k >= 1"));
    }
    let lay = HkLayout { k, n_k };
    let mut edges = Vec::with_capacity(lay.n_trees() * 6 * n_k + lay.n_trees());
    let mut labels = BTreeMap::new();
    for tree in 0..lay.n_trees() {
        let c = lay.center(tree);
        let mut leaves = Vec::with_capacity(2 * n_k);
        let mut pendants = Vec::with_capacity(4 * n_k);
        for j in 0..lay.leaves_per_tree() {
            let s = lay.leaf(tree, j);
            let [p1, p2] = lay.pendants(tree, j);
            edges.push((c, s, BigInt::from(0)));
            edges.push((s, p1, BigInt::from(0)));
            edges.push((s, p2, BigInt::from(0)));
            leaves.push(s);
            pendants.extend([p1, p2]);
        }
        let name = format!("{}[{}]", if tree % 2 == 0 { "v" } else { "w" }, tree / 2 + 1);
        labels.insert(format!("center_{name}"), vec![c]);
        labels.insert(format!("star_leaf_{name}"), leaves);
        labels.insert(format!("pendant_{name}"), pendants);
    }
    if connectors {
        for tree in 0..lay.n_trees() - 1 {
            edges.push((lay.pendants(tree, 0)[0], lay.pendants(tree + 1, 0)[0], BigInt::from(0)));
        }
    }
    Ok(Instance {
        graph: WeightedGraph::from_scaled(lay.n_vertices(), 0, edges)?,
        initial_cut: None,
        labels,
        family: Family::Hk { k, n_k, connectors },
        interval: None,
        weight_seed: None,
    })
}

/// One draw from the grid `{a + j·(b−a)/2^53 : 0 ≤ j ≤ 2^53}`.
pub fn sample_grid_weight<R: Rng + ?Sized>(rng: &mut R, a: &Weight, b: &Weight) -> Weight {
    let j: u64 = rng.gen_range(0..=(1u64 << GRID_BITS));
    let span = b - a;
    a + &(&span * &Weight::new(j, GRID_BITS))
}

/// Redraws every edge weight independently and uniformly from the grid on `[a, b]`.
/// The `i`-th edge uses the `i`-th draw of the weight stream of `seed`.
pub fn sample_weights(inst: &Instance, a: &Weight, b: &Weight, seed: &RngSeed) -> Result<Instance> {
    if a >= b {
        return Err(Error::invalid(format!("sampling interval needs a < b, got [{a}, {b}]")));
    }
    let mut rng = seed.child(tag::WEIGHTS).rng();
    let weights: Vec<Weight> = (0..inst.graph.n_edges()).map(|_| sample_grid_weight(&mut rng, a, b)).collect();
    Ok(Instance {
        graph: inst.graph.with_weights(&weights)?,
        interval: Some((a.clone(), b.clone())),
        weight_seed: Some(seed.clone()),
        ..inst.clone()
    })
}

/// A uniformly random cut drawn from the cut stream of `seed`.
pub fn sample_cut(inst: &Instance, seed: &RngSeed) -> Cut {
    let mut rng = seed.child(tag::CUT).rng();
    let sides = (0..inst.graph.n_vertices()).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
    Cut::new(sides).expect("sides are ±1")
}
