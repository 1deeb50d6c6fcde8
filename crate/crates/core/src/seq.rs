//! Log-concave and ultra-log-concave sequences.
//!
//! Log-concavity here always includes the requirement that the indices of
//! the nonzero terms form an interval. Checks cross-multiply instead of
//! taking logarithms, so the rational backend decides them exactly.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::measure::BinaryMeasure;
use crate::props::relation::{covers_on_chain, stoch_relation, OrderedJointLaw};
use crate::weight::Weight;

/// `C(n, 0..=n)`.
pub fn binomial_row(n: usize) -> Vec<u64> {
    let mut row = vec![1u64; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n - k + 1) as u64 / k as u64;
    }
    row
}

fn check_nonnegative<W: Weight>(s: &[W]) -> Result<()> {
    match s.iter().position(|x| x.is_negative()) {
        Some(i) => Err(Error::InvalidArgument(format!("negative entry at index {i}"))),
        None => Ok(()),
    }
}

/// Index of the first zero strictly inside the support, if any.
fn support_gap<W: Weight>(s: &[W]) -> Option<usize> {
    let first = s.iter().position(|x| !x.is_zero())?;
    let last = s.iter().rposition(|x| !x.is_zero())?;
    (first..=last).find(|&k| s[k].is_zero())
}

/// `Ok(None)` when log-concave, otherwise the first violating index.
pub fn is_log_concave<W: Weight>(s: &[W]) -> Result<Option<usize>> {
    check_nonnegative(s)?;
    if let Some(k) = support_gap(s) {
        return Ok(Some(k));
    }
    for k in 1..s.len().saturating_sub(1) {
        let lhs = s[k].mul(&s[k]);
        let rhs = s[k - 1].mul(&s[k + 1]);
        if lhs.cmp_weak(&rhs) == Ordering::Less {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// `Ok(None)` when `{a_k / C(n,k)}` is log-concave with interval support.
pub fn is_ulc<W: Weight>(a: &[W], n: usize) -> Result<Option<usize>> {
    if a.len() != n + 1 {
        return Err(Error::LengthMismatch { expected: n + 1, got: a.len() });
    }
    check_nonnegative(a)?;
    if let Some(k) = support_gap(a) {
        return Ok(Some(k));
    }
    let binom = binomial_row(n);
    for k in 1..n {
        // a_k^2 C(n,k-1) C(n,k+1) >= a_{k-1} a_{k+1} C(n,k)^2
        let lhs = a[k].mul(&a[k]).mul(&W::from_ratio((binom[k - 1] * binom[k + 1]) as i64, 1));
        let rhs = a[k - 1].mul(&a[k + 1]).mul(&W::from_ratio((binom[k] * binom[k]) as i64, 1));
        if lhs.cmp_weak(&rhs) == Ordering::Less {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

pub fn convolve<W: Weight>(s: &[W], t: &[W]) -> Vec<W> {
    if s.is_empty() || t.is_empty() {
        return Vec::new();
    }
    let mut out = vec![W::zero(); s.len() + t.len() - 1];
    for (i, x) in s.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in t.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

pub fn pointwise<W: Weight>(s: &[W], t: &[W]) -> Result<Vec<W>> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch { expected: s.len(), got: t.len() });
    }
    Ok(s.iter().zip(t).map(|(x, y)| x.mul(y)).collect())
}

pub fn reverse<W: Weight>(s: &[W]) -> Vec<W> {
    s.iter().rev().cloned().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqOp {
    Convolve,
    Pointwise,
    Reverse,
}

/// Dispatches one of the three log-concavity-preserving operations.
/// `Reverse` ignores `t`.
pub fn seq_algebra<W: Weight>(op: SeqOp, s: &[W], t: &[W]) -> Result<Vec<W>> {
    match op {
        SeqOp::Convolve => Ok(convolve(s, t)),
        SeqOp::Pointwise => pointwise(s, t),
        SeqOp::Reverse => Ok(reverse(s)),
    }
}

/// Law of the number of ones, `a_0..a_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankSequence<W: Weight> {
    a: Vec<W>,
    normalized: bool,
}

impl<W: Weight> RankSequence<W> {
    /// Normalizes nonnegative weights.
    pub fn from_weights(a: Vec<W>) -> Result<Self> {
        check_nonnegative(&a)?;
        let total = a.iter().fold(W::zero(), |acc, x| acc.add(x));
        if total.is_zero() {
            return Err(Error::InvalidArgument("rank sequence has no mass".into()));
        }
        Ok(RankSequence { a: a.iter().map(|x| x.div(&total)).collect(), normalized: true })
    }

    /// Keeps the weights as given.
    pub fn unnormalized(a: Vec<W>) -> Result<Self> {
        check_nonnegative(&a)?;
        Ok(RankSequence { a, normalized: false })
    }

    /// Requires the weights to sum to one already.
    pub fn normalized(a: Vec<W>) -> Result<Self> {
        check_nonnegative(&a)?;
        let total = a.iter().fold(W::zero(), |acc, x| acc.add(x));
        if total.cmp_weak(&W::one()) != Ordering::Equal {
            return Err(Error::InvalidArgument(format!(
                "rank sequence sums to {}, not 1",
                total.render()
            )));
        }
        Ok(RankSequence { a, normalized: true })
    }

    pub fn values(&self) -> &[W] {
        &self.a
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Lattice rank `n` (length minus one).
    pub fn n(&self) -> usize {
        self.a.len() - 1
    }

    pub fn is_ulc(&self) -> bool {
        matches!(is_ulc(&self.a, self.n()), Ok(None))
    }

    pub fn is_log_concave(&self) -> bool {
        matches!(is_log_concave(&self.a), Ok(None))
    }

    /// `q_k = a_k / C(n,k)`.
    pub fn per_atom(&self) -> Vec<W> {
        let binom = binomial_row(self.n());
        self.a
            .iter()
            .zip(binom)
            .map(|(a, b)| a.div(&W::from_ratio(b as i64, 1)))
            .collect()
    }
}

pub fn rank_sequence<W: Weight>(mu: &BinaryMeasure<W>) -> RankSequence<W> {
    RankSequence { a: mu.rank_weights(), normalized: true }
}

/// Joint law `P(X=i, Y=j) = K a_i b_j c_{i+j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbcLaw<W: Weight> {
    pub a: Vec<W>,
    pub b: Vec<W>,
    pub c: Vec<W>,
    joint: Vec<Vec<W>>,
}

/// Stochastic-order verdicts for the pairs `(X, Y, X+Y)` of an [`AbcLaw`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbcVerdicts {
    /// X ↑ (X+Y)
    pub x_up_in_sum: bool,
    /// Y ↑ (X+Y)
    pub y_up_in_sum: bool,
    /// (X+Y) ↑ X
    pub sum_up_in_x: bool,
    /// (X+Y) ↑ Y
    pub sum_up_in_y: bool,
    /// X ↓ Y
    pub x_down_in_y: bool,
    /// Y ↓ X
    pub y_down_in_x: bool,
    /// (X | X+Y=k+1) covers (X | X+Y=k) for every admissible k
    pub x_given_sum_covers: bool,
    /// (X+Y | X=k+1) covers (X+Y | X=k) for every admissible k
    pub sum_given_x_covers: bool,
}

impl<W: Weight> AbcLaw<W> {
    pub fn new(a: Vec<W>, b: Vec<W>, c: Vec<W>) -> Result<Self> {
        check_nonnegative(&a)?;
        check_nonnegative(&b)?;
        check_nonnegative(&c)?;
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidArgument("a and b must be nonempty".into()));
        }
        let need = a.len() + b.len() - 1;
        if c.len() < need {
            return Err(Error::LengthMismatch { expected: need, got: c.len() });
        }
        let raw: Vec<Vec<W>> = a
            .iter()
            .enumerate()
            .map(|(i, ai)| b.iter().enumerate().map(|(j, bj)| ai.mul(bj).mul(&c[i + j])).collect())
            .collect();
        let total = raw.iter().flatten().fold(W::zero(), |acc, x| acc.add(x));
        if total.is_zero() {
            return Err(Error::InvalidArgument("a_i b_j c_(i+j) vanishes identically".into()));
        }
        let joint = raw.iter().map(|row| row.iter().map(|x| x.div(&total)).collect()).collect();
        Ok(AbcLaw { a, b, c, joint })
    }

    /// `P(X = i, Y = j)`.
    pub fn joint(&self) -> &[Vec<W>] {
        &self.joint
    }

    fn law_of(&self, f: impl Fn(usize, usize) -> (usize, usize), nx: usize, ny: usize) -> OrderedJointLaw<W> {
        let mut p = vec![vec![W::zero(); ny]; nx];
        for (i, row) in self.joint.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let (u, w) = f(i, j);
                p[u][w] = p[u][w].add(v);
            }
        }
        OrderedJointLaw::new(p).expect("joint law of an AbcLaw is valid")
    }

    pub fn verdicts(&self) -> AbcVerdicts {
        let (na, nb) = (self.a.len(), self.b.len());
        let ns = na + nb - 1;
        let x_sum = stoch_relation(&self.law_of(|i, j| (i, i + j), na, ns)).ok();
        let y_sum = stoch_relation(&self.law_of(|i, j| (j, i + j), nb, ns)).ok();
        let x_y = stoch_relation(&self.law_of(|i, j| (i, j), na, nb)).ok();
        let x_given_sum = self.law_of(|i, j| (i + j, i), ns, na);
        let sum_given_x = self.law_of(|i, j| (i, i + j), na, ns);
        AbcVerdicts {
            x_up_in_sum: x_sum.map(|r| r.y_up_x).unwrap_or(false),
            y_up_in_sum: y_sum.map(|r| r.y_up_x).unwrap_or(false),
            sum_up_in_x: x_sum.map(|r| r.x_up_y).unwrap_or(false),
            sum_up_in_y: y_sum.map(|r| r.x_up_y).unwrap_or(false),
            x_down_in_y: x_y.map(|r| r.y_down_x).unwrap_or(false),
            y_down_in_x: x_y.map(|r| r.x_down_y).unwrap_or(false),
            x_given_sum_covers: rows_cover(&x_given_sum),
            sum_given_x_covers: rows_cover(&sum_given_x),
        }
    }
}

/// True iff for consecutive positive-mass rows `k < k'` the conditional
/// law of the column variable in row `k'` covers the one in row `k`.
fn rows_cover<W: Weight>(law: &OrderedJointLaw<W>) -> bool {
    let rows = law.rows();
    let live = |r: &Vec<W>| r.iter().any(|x| !x.is_zero());
    rows.windows(2)
        .filter(|w| live(&w[0]) && live(&w[1]))
        .all(|w| covers_on_chain(&w[1], &w[0]))
}

/// Builds the law and reports the verdict menu computed by [`stoch_relation`].
pub fn abc_law<W: Weight>(a: Vec<W>, b: Vec<W>, c: Vec<W>) -> Result<(AbcLaw<W>, AbcVerdicts)> {
    let law = AbcLaw::new(a, b, c)?;
    let v = law.verdicts();
    Ok((law, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{ratio, Rational};

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| ratio(x, 1)).collect()
    }

    #[test]
    fn log_concavity_examples() {
        assert_eq!(is_log_concave(&r(&[1, 2, 2, 1])).unwrap(), None);
        assert_eq!(is_log_concave(&r(&[1, 1, 2])).unwrap(), Some(1));
        assert_eq!(is_log_concave(&r(&[1, 0, 1])).unwrap(), Some(1));
        assert!(is_log_concave(&r(&[1, -1])).is_err());
        assert_eq!(is_log_concave(&r(&[0, 0, 3, 1, 0])).unwrap(), None);
    }

    #[test]
    fn ulc_examples() {
        // binomial(3, 1/2) up to scale
        assert_eq!(is_ulc(&r(&[1, 3, 3, 1]), 3).unwrap(), None);
        assert_eq!(is_ulc(&r(&[1, 1, 1]), 2).unwrap(), Some(1));
        assert!(is_ulc(&r(&[1, 1]), 2).is_err());
        // binomial(4, 1/3): q_k = 2^(4-k) is geometric
        assert_eq!(is_ulc(&r(&[16, 32, 24, 8, 1]), 4).unwrap(), None);
    }

    #[test]
    fn algebra_examples() {
        assert_eq!(convolve(&r(&[1, 1]), &r(&[1, 1])), r(&[1, 2, 1]));
        assert_eq!(reverse(&r(&[1, 2, 3])), r(&[3, 2, 1]));
        assert_eq!(pointwise(&r(&[1, 2]), &r(&[3, 4])).unwrap(), r(&[3, 8]));
        assert!(pointwise(&r(&[1, 2]), &r(&[3])).is_err());
        let c = seq_algebra(SeqOp::Convolve, &r(&[1, 2, 1]), &r(&[1, 1, 0])).unwrap();
        assert_eq!(c, r(&[1, 3, 3, 1, 0]));
    }

    #[test]
    fn ulc_pair_convolves_to_ulc() {
        let s = r(&[1, 2, 1]);
        let t = r(&[1, 1, 0]);
        assert_eq!(is_ulc(&s, 2).unwrap(), None);
        assert_eq!(is_ulc(&t, 2).unwrap(), None);
        assert_eq!(is_ulc(&convolve(&s, &t), 4).unwrap(), None);
    }

    #[test]
    fn rank_sequence_normalization_flags() {
        assert!(RankSequence::normalized(r(&[1, 1])).is_err());
        let s = RankSequence::from_weights(r(&[1, 2, 1])).unwrap();
        assert!(s.is_normalized());
        assert_eq!(s.values()[1], ratio(1, 2));
        assert_eq!(s.per_atom(), vec![ratio(1, 4), ratio(1, 4), ratio(1, 4)]);
        assert!(!RankSequence::unnormalized(r(&[1, 2])).unwrap().is_normalized());
    }

    #[test]
    fn abc_uniform_square_is_independent() {
        let (law, v) = abc_law(r(&[1, 1]), r(&[1, 1]), r(&[1, 1, 1])).unwrap();
        assert_eq!(law.joint()[0][0], ratio(1, 4));
        assert!(v.x_down_in_y && v.y_down_in_x);
    }

    #[test]
    fn abc_menu_with_log_concave_inputs() {
        let (_, v) = abc_law(r(&[1, 1]), r(&[1, 2, 1]), r(&[1, 1, 1, 1])).unwrap();
        assert!(v.x_up_in_sum);
        assert!(v.sum_up_in_x);
        assert!(v.x_down_in_y);
        assert!(v.x_given_sum_covers);
    }

    #[test]
    fn abc_rejects_zero_mass_and_short_c() {
        assert!(AbcLaw::new(r(&[1]), r(&[1]), r(&[0])).is_err());
        assert!(AbcLaw::new(r(&[1, 1]), r(&[1, 1]), r(&[1, 1])).is_err());
    }
}
