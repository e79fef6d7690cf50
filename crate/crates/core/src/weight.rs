//! Exact dyadic edge weights.
//!
//! Every edge weight produced by the generators is a dyadic rational
//! `num / 2^exp`: the hard instances use integers and the sampled weights
//! live on a `2^-53` grid. Sums and comparisons of dyadics never need a gcd,
//! which keeps the inner loops of local search on plain big-integer adds.
//! Quantities that leave the dyadic world (the `3^-i` improvement targets,
//! interval endpoints like `n/5`) are handled as [`Rational`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary-precision rational, used where values are not dyadic.
pub type Rational = BigRational;

/// An exact value `num / 2^exp`, kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Weight {
    num: BigInt,
    exp: u32,
}

impl Weight {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        let mut w = Weight { num: num.into(), exp };
        w.normalize();
        w
    }

    pub fn from_int(v: i64) -> Self {
        Weight { num: BigInt::from(v), exp: 0 }
    }

    pub fn zero() -> Self {
        Weight::default()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        let shift = tz.min(u64::from(self.exp)) as u32;
        if shift > 0 {
            self.num >>= shift;
            self.exp -= shift;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// Exponent `p` of the denominator `2^p`.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    /// Numerator of this value over the denominator `2^exp`.
    ///
    /// Panics if `exp` is smaller than the value's own exponent, since the
    /// result would not be an integer.
    pub fn scaled_numerator(&self, exp: u32) -> BigInt {
        assert!(exp >= self.exp, "cannot scale 2^-{} value to 2^-{exp}", self.exp);
        &self.num << (exp - self.exp)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn abs(&self) -> Weight {
        Weight { num: self.num.abs(), exp: self.exp }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.num.clone(), BigInt::one() << self.exp)
    }

    /// Converts a rational whose reduced denominator is a power of two.
    pub fn from_rational(r: &Rational) -> Option<Weight> {
        let den = r.denom();
        if !den.is_positive() {
            return None;
        }
        let tz = den.trailing_zeros().unwrap_or(0);
        if den != &(BigInt::one() << tz) {
            return None;
        }
        Some(Weight::new(r.numer().clone(), tz as u32))
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64().unwrap_or(f64::NAN);
        n * 2f64.powi(-(self.exp as i32))
    }

    fn align(&self, other: &Weight) -> (BigInt, BigInt, u32) {
        let exp = self.exp.max(other.exp);
        (self.scaled_numerator(exp), other.scaled_numerator(exp), exp)
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.align(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        let (a, b, exp) = self.align(rhs);
        Weight::new(a + b, exp)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        let (a, b, exp) = self.align(rhs);
        Weight::new(a - b, exp)
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight { num: -self.num, exp: self.exp }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight { num: -&self.num, exp: self.exp }
    }
}

impl Mul for &Weight {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        Weight::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Mul<i64> for &Weight {
    type Output = Weight;
    fn mul(self, rhs: i64) -> Weight {
        Weight::new(&self.num * rhs, self.exp)
    }
}

impl std::iter::Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::zero(), |acc, w| acc + w)
    }
}

impl From<i64> for Weight {
    fn from(v: i64) -> Self {
        Weight::from_int(v)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigInt::one() << self.exp)
        }
    }
}

/// Parses `7`, `-3/8`, or a decimal with a finite binary expansion (`0.25`).
impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let r = parse_rational(s)?;
        Weight::from_rational(&r)
            .ok_or_else(|| Error::invalid(format!("`{s}` is not a dyadic rational (denominator must be a power of two)")))
    }
}

/// Parses `p`, `p/q`, or a finite decimal into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::invalid(format!("cannot parse `{s}` as a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_val: BigInt = match int {
            "" | "-" | "+" => BigInt::zero(),
            _ => int.parse().map_err(|_| bad())?,
        };
        let frac_val: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = int_val.abs() * &scale + frac_val;
        let num = if negative { -mag } else { mag };
        return Ok(Rational::new(num, scale));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// `3^-e` as an exact rational.
pub fn inv_pow3(e: u32) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(3), e as usize))
}

/// Approximate value of a rational, for reports and log-scale fits.
pub fn rational_to_f64(r: &Rational) -> f64 {
    // Scale both parts down together so huge denominators don't overflow to inf.
    let bits = r.numer().bits().max(r.denom().bits());
    let shift = bits.saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    if d == 0.0 {
        return r.to_f64().unwrap_or(f64::NAN);
    }
    n / d
}

/// Ceiling and floor helpers for exact threshold comparisons against integers.
pub(crate) fn ceil_rational(r: &Rational) -> BigInt {
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    if rem.is_zero() {
        q
    } else {
        q + 1
    }
}

pub(crate) fn floor_rational(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
