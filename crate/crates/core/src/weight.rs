//! Numeric backends.
//!
//! A measure carries its weights either as exact rationals or as `f64`.
//! Checkers never compare normalized probabilities directly: every
//! inequality they decide is homogeneous in the atom weights, so the
//! rational backend is first rescaled to a common denominator and the
//! comparisons run over plain integers ([`Ring`]).

use std::cmp::Ordering;
use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational number used by the rational backend.
pub type Rational = BigRational;

/// Absolute slack allowed before a float comparison counts as a violation.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// Tolerance on the total mass of a float measure.
pub const FLOAT_MASS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Rational => f.write_str("rational"),
            Backend::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" => Ok(Backend::Rational),
            "float" => Ok(Backend::Float),
            other => Err(format!("unknown backend `{other}`")),
        }
    }
}

/// Arithmetic used by the homogeneous comparisons inside the checkers.
///
/// Only ring operations are needed. `f64` compares with
/// [`FLOAT_TOLERANCE`] slack, `BigInt` compares exactly.
pub trait Ring: Clone + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(v: u64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn add_assign(&mut self, other: &Self);
    /// Exact zero test (no tolerance); used to skip undefined conditionals.
    fn is_exact_zero(&self) -> bool;
    /// `self > other` by more than the backend tolerance.
    fn exceeds(&self, other: &Self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_u64(v: u64) -> Self {
        BigInt::from(v)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn exceeds(&self, other: &Self) -> bool {
        self > other
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_u64(v: u64) -> Self {
        v as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn exceeds(&self, other: &Self) -> bool {
        self - other > FLOAT_TOLERANCE
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Scalar type of a [`BinaryMeasure`](crate::BinaryMeasure).
pub trait Weight: Clone + Debug + PartialEq + Send + Sync + 'static {
    /// Integer-like ring the checkers run in after rescaling.
    type Scaled: Ring;
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Panics on an exact zero divisor; callers check mass first.
    fn div(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Comparison used by validity checks; floats compare with tolerance.
    fn cmp_weak(&self, other: &Self) -> Ordering;
    /// Common-denominator rescaling of a weight vector (positive factor).
    fn scale_all(weights: &[Self]) -> Vec<Self::Scaled>;
    /// Canonical text form (`p/q` for rationals, shortest round-trip for floats).
    fn render(&self) -> String;
    fn parse(s: &str) -> Option<Self>;
    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Weight for Rational {
    type Scaled = BigInt;
    const BACKEND: Backend = Backend::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn cmp_weak(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn scale_all(weights: &[Self]) -> Vec<BigInt> {
        let lcm = weights
            .iter()
            .fold(<BigInt as One>::one(), |acc, w| acc.lcm(w.denom()));
        weights
            .iter()
            .map(|w| w.numer() * (&lcm / w.denom()))
            .collect()
    }
    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
    fn parse(s: &str) -> Option<Self> {
        parse_rational(s)
    }
}

impl Weight for f64 {
    type Scaled = f64;
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        assert!(*other != 0.0, "division by zero weight");
        self / other
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn cmp_weak(&self, other: &Self) -> Ordering {
        if (self - other).abs() <= FLOAT_TOLERANCE {
            Ordering::Equal
        } else if self < other {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
    fn scale_all(weights: &[Self]) -> Vec<f64> {
        weights.to_vec()
    }
    fn render(&self) -> String {
        format!("{self:?}")
    }
    fn parse(s: &str) -> Option<Self> {
        if let Some(r) = parse_rational(s) {
            if s.contains('/') {
                return ToPrimitive::to_f64(&r);
            }
        }
        s.trim().parse::<f64>().ok().filter(|x| x.is_finite())
    }
}

/// Parses `p/q`, an integer, or a terminating decimal such as `0.05` or `1e-3`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if Zero::is_zero(&q) {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let all = all / BigInt::from(10);
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

/// Shorthand for `p/q` as an exact rational.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}
