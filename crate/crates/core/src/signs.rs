//! Signed-sum approximation: choose `a ∈ {-1,+1}^n` so that `Σ a_i X_i` is as
//! close as possible to a target, and the worst such error over an interval.
//!
//! Exact solvers merge sorted half-enumerations of the achievable sums. They
//! run on `i128` when every scaled quantity fits comfortably and fall back to
//! big integers otherwise.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::sample_grid_weight;
use crate::rng::{tag, RngSeed};
use crate::weight::{ceil_rational, floor_rational, rational_to_f64, Rational, Weight};

pub const EXACT_SIGNS_MAX: usize = 40;
pub const EXACT_EPSILON_MAX: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignAssignment {
    pub signs: Vec<i8>,
    /// `Σ signs[i]·xs[i]`.
    pub achieved: Weight,
    /// `|target - achieved|`; a rational because targets need not be dyadic.
    pub error: Rational,
}

impl SignAssignment {
    fn from_signs(x: &Rational, xs: &[Weight], signs: Vec<i8>) -> Self {
        let achieved: Weight = xs.iter().zip(&signs).map(|(w, &s)| if s > 0 { w.clone() } else { -w }).sum();
        let error = (x - achieved.to_rational()).abs();
        SignAssignment { signs, achieved, error }
    }
}

/// Common-denominator integer view of a target and its items:
/// target `p/q` and items `xs[i]·q`, all over `2^exp`.
struct Scaled {
    target: BigInt,
    items: Vec<BigInt>,
}

fn scale(x: &Rational, xs: &[Weight]) -> Scaled {
    let exp = xs.iter().map(Weight::exponent).max().unwrap_or(0);
    let q = x.denom().clone();
    let target = x.numer() << exp as usize;
    let items = xs.iter().map(|w| w.scaled_numerator(exp) * &q).collect();
    Scaled { target, items }
}

/// True when every partial sum and distance fits in `i128` with room to spare.
fn fits_i128(target: &BigInt, items: &[BigInt]) -> bool {
    let total: BigInt = items.iter().map(|v| v.abs()).sum::<BigInt>() + target.abs();
    total.bits() < 120
}

trait Int: Clone + Ord + std::fmt::Debug + Send + Sync + num_traits::Signed {
    fn from_big(v: &BigInt) -> Self;
}

impl Int for i128 {
    fn from_big(v: &BigInt) -> Self {
        v.to_i128().expect("value checked to fit")
    }
}

impl Int for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }
}

/// Sums of all sign patterns of `items`, indexed by mask. Bit `j` of the mask
/// set means item `len-1-j` is negative, so numeric mask order is the
/// lexicographic order of sign vectors with `+` before `-`.
fn half_sums<T: Int>(items: &[T]) -> Vec<T> {
    let h = items.len();
    let all_plus = items.iter().fold(T::zero(), |acc, x| acc + x.clone());
    let mut sums = Vec::with_capacity(1 << h);
    sums.push(all_plus);
    for mask in 1usize..1 << h {
        let low = mask.trailing_zeros() as usize;
        let x = &items[h - 1 - low];
        let prev = sums[mask & (mask - 1)].clone();
        sums.push(prev - x.clone() - x.clone());
    }
    sums
}

fn mask_to_signs(mask: u64, n: usize) -> Vec<i8> {
    (0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { -1 } else { 1 }).collect()
}

fn exact_mask<T: Int>(target: &T, items: &[T]) -> u64 {
    let n = items.len();
    let h = n / 2;
    let (left, right) = items.split_at(h);
    let a = half_sums(left);
    let b_sums = half_sums(right);
    let mut b: Vec<(T, u64)> = b_sums.into_iter().enumerate().map(|(m, s)| (s, m as u64)).collect();
    b.sort_unstable();
    // First index of each run of equal sums, so the smallest mask of a sum is at hand.
    let mut run_start = vec![0usize; b.len()];
    for i in 1..b.len() {
        run_start[i] = if b[i].0 == b[i - 1].0 { run_start[i - 1] } else { i };
    }

    let shift = n - h;
    let mut best: Option<(T, u64)> = None;
    for (am, sa) in a.iter().enumerate() {
        let want = target.clone() - sa.clone();
        let pos = b.partition_point(|(s, _)| *s < want);
        let mut local: Option<(T, u64)> = None;
        if pos < b.len() {
            local = Some((b[pos].0.clone() - want.clone(), b[pos].1));
        }
        if pos > 0 {
            let (s, m) = &b[run_start[pos - 1]];
            let d = want.clone() - s.clone();
            if local.as_ref().map_or(true, |(ld, lm)| d < *ld || (d == *ld && *m < *lm)) {
                local = Some((d, *m));
            }
        }
        let (d, bm) = local.expect("b is never empty");
        if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
            best = Some((d, ((am as u64) << shift) | bm));
        }
    }
    best.expect("a is never empty").1
}

/// Globally optimal signs for approximating `x` by `Σ a_i xs[i]`.
///
/// Among optimal sign vectors the lexicographically smallest wins, with `+`
/// ordered before `-`.
pub fn best_signs_exact(x: &Rational, xs: &[Weight]) -> Result<SignAssignment> {
    let n = xs.len();
    if n > EXACT_SIGNS_MAX {
        return Err(Error::resource(format!("exact sign solver handles at most {EXACT_SIGNS_MAX} values, got {n}")));
    }
    let s = scale(x, xs);
    let mask = if fits_i128(&s.target, &s.items) {
        let items: Vec<i128> = s.items.iter().map(i128::from_big).collect();
        exact_mask(&i128::from_big(&s.target), &items)
    } else {
        exact_mask(&s.target, &s.items)
    };
    Ok(SignAssignment::from_signs(x, xs, mask_to_signs(mask, n)))
}

/// Karmarkar–Karp differencing with the target as an extra item, then
/// 1-flip and 2-swap polishing for at most `effort` passes.
///
/// Never worse than all-plus and fully deterministic.
pub fn best_signs_heuristic(x: &Rational, xs: &[Weight], effort: usize) -> SignAssignment {
    let n = xs.len();
    let s = scale(x, xs);
    let mut values: Vec<BigInt> = Vec::with_capacity(n + 1);
    values.push(s.target.clone());
    values.extend(s.items.iter().cloned());

    // Differencing on magnitudes; `rel[i]` is i's side relative to `parent[i]`.
    let m = values.len();
    let mut parent: Vec<Option<usize>> = vec![None; m];
    let mut rel = vec![1i8; m];
    let mut heap: BinaryHeap<(BigInt, Reverse<usize>)> =
        values.iter().enumerate().map(|(i, v)| (v.abs(), Reverse(i))).collect();
    while heap.len() > 1 {
        let (va, Reverse(a)) = heap.pop().expect("len > 1");
        let (vb, Reverse(b)) = heap.pop().expect("len > 1");
        parent[b] = Some(a);
        rel[b] = -1;
        heap.push((va - vb, Reverse(a)));
    }
    let side = |mut i: usize| {
        let mut s = 1i8;
        while let Some(p) = parent[i] {
            s *= rel[i];
            i = p;
        }
        s
    };
    let actual: Vec<i8> = (0..m).map(|i| side(i) * if values[i].is_negative() { -1 } else { 1 }).collect();
    let mut signs: Vec<i8> = (1..m).map(|i| -actual[0] * actual[i]).collect();

    // Residual Σ a_i X_i - x in scaled integers.
    let mut residual: BigInt =
        s.items.iter().zip(&signs).map(|(v, &a)| if a > 0 { v.clone() } else { -v }).sum::<BigInt>() - &s.target;
    for _ in 0..effort {
        let mut improved = false;
        for i in 0..n {
            let step: BigInt = if signs[i] > 0 { -&s.items[i] * 2 } else { &s.items[i] * 2 };
            let cand: BigInt = &residual + &step;
            if cand.abs() < residual.abs() {
                residual = cand;
                signs[i] = -signs[i];
                improved = true;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let di: BigInt = if signs[i] > 0 { -&s.items[i] * 2 } else { &s.items[i] * 2 };
                let dj: BigInt = if signs[j] > 0 { -&s.items[j] * 2 } else { &s.items[j] * 2 };
                let cand: BigInt = &residual + di + dj;
                if cand.abs() < residual.abs() {
                    residual = cand;
                    signs[i] = -signs[i];
                    signs[j] = -signs[j];
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }

    let found = SignAssignment::from_signs(x, xs, signs);
    let all_plus = SignAssignment::from_signs(x, xs, vec![1; n]);
    if all_plus.error < found.error {
        all_plus
    } else {
        found
    }
}

/// Exact solver up to `window` values. Beyond that, the heuristic result is
/// refined by re-solving windows of `window` values exactly with all other
/// signs held fixed: the largest values, the smallest, and strided slices
/// of the size order, so both coarse and fine adjustments are available.
pub fn best_signs(x: &Rational, xs: &[Weight], effort: usize, window: usize) -> SignAssignment {
    let window = window.clamp(1, EXACT_SIGNS_MAX);
    let n = xs.len();
    if n <= window {
        return best_signs_exact(x, xs).expect("size checked");
    }
    let mut by_size: Vec<usize> = (0..n).collect();
    by_size.sort_by(|&a, &b| xs[b].abs().cmp(&xs[a].abs()).then(a.cmp(&b)));
    let stride = n.div_ceil(window);
    let mut windows: Vec<Vec<usize>> = vec![by_size[..window].to_vec(), by_size[n - window..].to_vec()];
    windows.extend((0..stride).map(|off| by_size.iter().skip(off).step_by(stride).copied().collect()));

    let mut best = best_signs_heuristic(x, xs, effort);
    for _round in 0..2 {
        let before = best.error.clone();
        for free in &windows {
            let mut in_window = vec![false; n];
            for &i in free {
                in_window[i] = true;
            }
            let fixed_sum: Weight = (0..n)
                .filter(|&i| !in_window[i])
                .map(|i| if best.signs[i] > 0 { xs[i].clone() } else { -&xs[i] })
                .sum();
            let sub: Vec<Weight> = free.iter().map(|&i| xs[i].clone()).collect();
            let part = best_signs_exact(&(x - fixed_sum.to_rational()), &sub).expect("window fits the exact solver");
            let mut signs = best.signs.clone();
            for (&i, &a) in free.iter().zip(&part.signs) {
                signs[i] = a;
            }
            let refined = SignAssignment::from_signs(x, xs, signs);
            if refined.error < best.error {
                best = refined;
            }
        }
        if best.error == before {
            break;
        }
    }
    best
}

/// Streams all `2^n` signed sums of `items` in ascending order.
fn for_each_sorted_sum(items: &[i128], mut f: impl FnMut(i128)) {
    let h = items.len() / 2;
    let mut a = half_sums(&items[..h]);
    let mut b = half_sums(&items[h..]);
    a.sort_unstable();
    b.sort_unstable();
    let mut heap: BinaryHeap<Reverse<(i128, usize, usize)>> =
        a.iter().enumerate().map(|(i, &sa)| Reverse((sa + b[0], i, 0))).collect();
    while let Some(Reverse((s, i, j))) = heap.pop() {
        f(s);
        if j + 1 < b.len() {
            heap.push(Reverse((a[i] + b[j + 1], i, j + 1)));
        }
    }
}

/// `max_{x ∈ [lo, hi]} min_a |x - Σ a_i xs[i]|`, exactly.
///
/// The inner distance is piecewise linear in `x`, so the maximum sits at an
/// endpoint of the interval or at the midpoint of two consecutive achievable sums.
pub fn epsilon_exact(lo: &Rational, hi: &Rational, xs: &[Weight]) -> Result<Rational> {
    let n = xs.len();
    if n > EXACT_EPSILON_MAX {
        return Err(Error::resource(format!("exact epsilon handles at most {EXACT_EPSILON_MAX} values, got {n}")));
    }
    if lo > hi {
        return Err(Error::invalid("interval lower end exceeds upper end"));
    }
    let exp = xs.iter().map(Weight::exponent).max().unwrap_or(0);
    let items: Vec<i128> = xs
        .iter()
        .map(|w| w.scaled_numerator(exp).to_i128().filter(|v| v.unsigned_abs() < 1 << 100))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::resource("values too large for exact epsilon"))?;
    let pow = Rational::from_integer(BigInt::one() << exp as usize);
    let (l, h) = (lo * &pow, hi * &pow);
    // Midpoints (s + t)/2 with s + t in [2l, 2h]; clamp the integer bounds into i128.
    let clamp = |v: BigInt| v.to_i128().unwrap_or(if v.is_negative() { i128::MIN / 2 } else { i128::MAX / 2 });
    let mid_lo = clamp(ceil_rational(&(&l * BigInt::from(2))));
    let mid_hi = clamp(floor_rational(&(&h * BigInt::from(2))));
    let l_floor = clamp(floor_rational(&l));
    let h_floor = clamp(floor_rational(&h));

    let mut best_gap: i128 = 0;
    let mut prev: Option<i128> = None;
    // Nearest sums at or below / above each endpoint.
    let (mut l_below, mut l_above, mut h_below, mut h_above) = (None, None, None, None);
    for_each_sorted_sum(&items, |s| {
        if let Some(p) = prev {
            let twice_mid = p + s;
            if twice_mid >= mid_lo && twice_mid <= mid_hi {
                best_gap = best_gap.max(s - p);
            }
        }
        prev = Some(s);
        if s <= l_floor {
            l_below = Some(s);
        } else if l_above.is_none() {
            l_above = Some(s);
        }
        if s <= h_floor {
            h_below = Some(s);
        } else if h_above.is_none() {
            h_above = Some(s);
        }
    });
    let nearest = |x: &Rational, below: Option<i128>, above: Option<i128>| {
        let d_below = below.map(|s| x - Rational::from_integer(s.into()));
        let d_above = above.map(|s| Rational::from_integer(s.into()) - x);
        match (d_below, d_above) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("at least one sum exists"),
        }
    };
    // A sum equal to a non-integer endpoint lands in `above`; `l - floor` handles the below side.
    let mut eps = nearest(&l, l_below, l_above).max(nearest(&h, h_below, h_above));
    eps = eps.max(Rational::new(best_gap.into(), BigInt::from(2)));
    Ok(eps / pow)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonRow {
    pub n: usize,
    /// One value per trial, in trial order.
    pub values: Vec<Rational>,
    pub median: Rational,
    pub max: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonStudy {
    pub rows: Vec<EpsilonRow>,
    /// Least-squares slope of `log2(median)` against `n`.
    pub slope: f64,
}

/// Stream for trial `trial` of size `n`; independent of how many trials run.
pub fn epsilon_trial_seed(seed: &RngSeed, n: usize, trial: usize) -> RngSeed {
    seed.child(tag::EPSILON).child(n as u64).child(trial as u64)
}

/// Samples `X_1..X_n` uniformly on `[b, b+1]` and computes
/// `ε([-n/5, n/5], X)` for each `n` and trial.
pub fn epsilon_decay_study(n_values: &[usize], b: &Weight, trials: usize, seed: &RngSeed) -> Result<EpsilonStudy> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if let Some(&n) = n_values.iter().find(|&&n| n > EXACT_EPSILON_MAX) {
        return Err(Error::resource(format!("exact epsilon handles at most {EXACT_EPSILON_MAX} values, got {n}")));
    }
    let upper = b + &Weight::from_int(1);
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let bound = Rational::new(BigInt::from(n), BigInt::from(5));
        let values = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = epsilon_trial_seed(seed, n, t).rng();
                let xs: Vec<Weight> = (0..n).map(|_| sample_grid_weight(&mut rng, b, &upper)).collect();
                epsilon_exact(&-bound.clone(), &bound, &xs)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sorted = values.clone();
        sorted.sort();
        let median = if trials % 2 == 1 {
            sorted[trials / 2].clone()
        } else {
            (&sorted[trials / 2 - 1] + &sorted[trials / 2]) / BigInt::from(2)
        };
        let max = sorted.last().expect("trials >= 1").clone();
        rows.push(EpsilonRow { n, values, median, max });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.median.is_positive())
        .map(|r| (r.n as f64, rational_to_f64(&r.median).log2()))
        .collect();
    Ok(EpsilonStudy { rows, slope: least_squares_slope(&points) })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return f64::NAN;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
