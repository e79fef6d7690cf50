//! Independent oracles and random instances shared by the integration tests.
#![allow(dead_code)]

use flipcut::weight::Rational;
use flipcut::{Cut, VertexId, Weight, WeightedGraph};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cut value summed edge by edge over rationals, bypassing the library's arithmetic.
pub fn oracle_cut_value(g: &WeightedGraph, sigma: &Cut) -> Rational {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| sigma.side(e.u) != sigma.side(e.v))
        .map(|(i, _)| g.weight(i).to_rational())
        .fold(Rational::zero(), |a, b| a + b)
}

pub fn oracle_improvement(g: &WeightedGraph, sigma: &Cut, set: &[VertexId]) -> Rational {
    let mut after = sigma.clone();
    for &v in set {
        after.flip(v);
    }
    oracle_cut_value(g, &after) - oracle_cut_value(g, sigma)
}

/// Erdős–Rényi style graph with small integer or dyadic weights.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64, max_abs: i64, dyadic: bool) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                let num = rng.gen_range(-max_abs..=max_abs);
                let exp = if dyadic { rng.gen_range(0..4) } else { 0 };
                edges.push((u, v, Weight::new(num, exp)));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

pub fn random_cut(rng: &mut impl Rng, n: usize) -> Cut {
    Cut::new((0..n).map(|_| if rng.gen() { 1 } else { -1 }).collect()).unwrap()
}

/// All duplicate-free subsets of `0..n` with size `1..=k`.
pub fn all_subsets(n: usize, k: usize) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize <= k {
            out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

/// Best achievable error by trying every sign vector.
pub fn naive_best_error(x: &Rational, xs: &[Weight]) -> (Rational, Vec<i8>) {
    let n = xs.len();
    let mut best: Option<(Rational, Vec<i8>)> = None;
    // Lexicographic order with + before -: bit (n-1-i) set means sign i is -.
    for mask in 0u64..(1 << n) {
        let signs: Vec<i8> = (0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { -1 } else { 1 }).collect();
        let sum = xs
            .iter()
            .zip(&signs)
            .fold(Rational::zero(), |acc, (w, &s)| if s > 0 { acc + w.to_rational() } else { acc - w.to_rational() });
        let err = (x - sum).abs();
        if best.as_ref().map_or(true, |(b, _)| err < *b) {
            best = Some((err, signs));
        }
    }
    best.unwrap()
}

/// Grid estimate of `max_{x in [lo, hi]} min_a |x - Σ a_i X_i|` with step `2^-20`.
pub fn grid_epsilon(lo: f64, hi: f64, xs: &[f64]) -> f64 {
    let mut sums = vec![0.0f64];
    for &x in xs {
        sums = sums.iter().flat_map(|&s| [s + x, s - x]).collect();
    }
    sums.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let step = 2f64.powi(-20);
    let mut best = 0.0f64;
    let mut j = 0usize;
    let mut x = lo;
    while x <= hi {
        while j + 1 < sums.len() && sums[j + 1] <= x {
            j += 1;
        }
        let mut d = (x - sums[j]).abs();
        if j + 1 < sums.len() {
            d = d.min((sums[j + 1] - x).abs());
        }
        best = best.max(d);
        x += step;
    }
    // The grid may step over the upper end point.
    let mut d = f64::INFINITY;
    for &s in &sums {
        d = d.min((hi - s).abs());
    }
    best.max(d)
}

/// Brute-force maximum cut value.
pub fn oracle_max_cut(g: &WeightedGraph) -> Rational {
    let n = g.n_vertices();
    let mut best: Option<Rational> = None;
    for mask in 0u32..(1 << n) {
        let cut = Cut::new((0..n).map(|v| if mask >> v & 1 == 1 { -1 } else { 1 }).collect()).unwrap();
        let val = oracle_cut_value(g, &cut);
        if best.as_ref().map_or(true, |b| val > *b) {
            best = Some(val);
        }
    }
    best.unwrap_or_else(Rational::zero)
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

/// Change in cut value from flipping `set`, looking only at incident edges.
pub fn oracle_local_improvement(g: &WeightedGraph, sigma: &Cut, set: &[VertexId]) -> Rational {
    let moved = |v: VertexId| set.contains(&v);
    let mut seen = std::collections::BTreeSet::new();
    let p = g.denom_exp();
    let mut total = BigInt::zero();
    for &v in set {
        for &(u, e) in g.neighbors(v) {
            if !seen.insert(e) {
                continue;
            }
            let before = sigma.side(u) != sigma.side(v);
            let after = (moved(u) != moved(v)) != before;
            match (before, after) {
                (false, true) => total += g.weight(e).scaled_numerator(p),
                (true, false) => total -= g.weight(e).scaled_numerator(p),
                _ => {}
            }
        }
    }
    Rational::new(total, BigInt::one() << p as usize)
}
