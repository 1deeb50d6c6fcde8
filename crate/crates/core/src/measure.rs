//! Probability measures on the Boolean lattice.

use std::cmp::Ordering;

use crate::error::{check_rank, Error, Result};
use crate::lattice::{EventSet, MAX_ORDER_RANK};
use crate::weight::{Rational, Weight, FLOAT_MASS_TOLERANCE};

/// Largest rank for which a measure is stored densely.
pub const MAX_MEASURE_RANK: usize = MAX_ORDER_RANK;

/// Exact probability assignment on the `2^n` configurations of `n`
/// binary variables, indexed by the bit convention of [`crate::lattice`].
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryMeasure<W: Weight> {
    n: usize,
    probs: Vec<W>,
}

pub type RationalMeasure = BinaryMeasure<Rational>;
pub type FloatMeasure = BinaryMeasure<f64>;

impl<W: Weight> BinaryMeasure<W> {
    /// Normalizes nonnegative weights into a probability measure.
    pub fn from_weights(n: usize, weights: Vec<W>) -> Result<Self> {
        check_rank(n, MAX_MEASURE_RANK, "measures")?;
        if weights.len() != 1 << n {
            return Err(Error::LengthMismatch { expected: 1 << n, got: weights.len() });
        }
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::InvalidMeasure(format!("negative weight at index {i}")));
        }
        let total = weights.iter().fold(W::zero(), |acc, w| acc.add(w));
        if total.is_zero() {
            return Err(Error::InvalidMeasure("support is empty".into()));
        }
        let probs = weights.iter().map(|w| w.div(&total)).collect();
        Ok(BinaryMeasure { n, probs })
    }

    /// Accepts weights that already sum to one (exactly, or within
    /// `1e-9` for floats).
    pub fn from_probs(n: usize, probs: Vec<W>) -> Result<Self> {
        let total = probs.iter().fold(W::zero(), |acc, w| acc.add(w));
        let ok = match W::BACKEND {
            crate::Backend::Rational => total == W::one(),
            crate::Backend::Float => (total.to_f64() - 1.0).abs() <= FLOAT_MASS_TOLERANCE,
        };
        if !ok {
            return Err(Error::InvalidMeasure(format!(
                "total mass {} is not 1",
                total.render()
            )));
        }
        Self::from_weights(n, probs)
    }

    /// Builds a measure from `(configuration index, weight)` pairs.
    pub fn from_sparse(n: usize, atoms: impl IntoIterator<Item = (usize, W)>) -> Result<Self> {
        check_rank(n, MAX_MEASURE_RANK, "measures")?;
        let mut w = vec![W::zero(); 1 << n];
        for (i, x) in atoms {
            if i >= w.len() {
                return Err(Error::InvalidConfiguration(format!("index {i} out of range")));
            }
            w[i] = w[i].add(&x);
        }
        Self::from_weights(n, w)
    }

    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        Self::from_sparse(n, [(index, W::one())])
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_weights(n, vec![W::one(); 1 << n])
    }

    /// Independent Bernoulli variables with the given success probabilities.
    pub fn product_bernoulli(ps: &[W]) -> Result<Self> {
        let n = ps.len();
        check_rank(n, MAX_MEASURE_RANK, "measures")?;
        for p in ps {
            if p.is_negative() || p.cmp_weak(&W::one()) == Ordering::Greater {
                return Err(Error::InvalidArgument(format!(
                    "Bernoulli parameter {} outside [0,1]",
                    p.render()
                )));
            }
        }
        let probs = (0..1usize << n)
            .map(|x| {
                ps.iter().enumerate().fold(W::one(), |acc, (j, p)| {
                    if x >> j & 1 == 1 {
                        acc.mul(p)
                    } else {
                        acc.mul(&W::one().sub(p))
                    }
                })
            })
            .collect();
        Self::from_weights(n, probs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[W] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<W> {
        self.probs
    }

    pub fn prob(&self, index: usize) -> &W {
        &self.probs[index]
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(i, _)| i)
    }

    pub fn mass(&self, event: &EventSet) -> Result<W> {
        if event.n() != self.n {
            return Err(Error::RankMismatch(self.n, event.n()));
        }
        Ok(event.indices().fold(W::zero(), |acc, i| acc.add(&self.probs[i])))
    }

    pub fn mass_where(&self, mut pred: impl FnMut(usize) -> bool) -> W {
        self.probs
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(*i))
            .fold(W::zero(), |acc, (_, p)| acc.add(p))
    }

    /// `P(X_j = 1)`, 0-based `j`.
    pub fn marginal(&self, j: usize) -> W {
        self.mass_where(|i| i >> j & 1 == 1)
    }

    pub fn covariance(&self, e: usize, f: usize) -> W {
        let both = self.mass_where(|i| i >> e & 1 == 1 && i >> f & 1 == 1);
        both.sub(&self.marginal(e).mul(&self.marginal(f)))
    }

    /// Probabilities `a_k = P(ΣX_j = k)`.
    pub fn rank_weights(&self) -> Vec<W> {
        let mut a = vec![W::zero(); self.n + 1];
        for (i, p) in self.probs.iter().enumerate() {
            let k = i.count_ones() as usize;
            a[k] = a[k].add(p);
        }
        a
    }

    /// Atoms rescaled to a common denominator (positive multiple of the
    /// probabilities).
    pub fn scaled(&self) -> Vec<W::Scaled> {
        W::scale_all(&self.probs)
    }

    pub fn to_float(&self) -> FloatMeasure {
        BinaryMeasure { n: self.n, probs: self.probs.iter().map(|p| p.to_f64()).collect() }
    }

    pub fn is_exchangeable(&self) -> bool {
        let a = self.rank_weights();
        let binom = crate::seq::binomial_row(self.n);
        self.probs.iter().enumerate().all(|(i, p)| {
            let k = i.count_ones() as usize;
            p.mul(&W::from_ratio(binom[k] as i64, 1)).cmp_weak(&a[k]) == Ordering::Equal
        })
    }

    /// Total variation distance.
    pub fn total_variation(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
            .sum::<f64>()
            / 2.0)
    }

    pub(crate) fn from_parts_unchecked(n: usize, probs: Vec<W>) -> Self {
        debug_assert_eq!(probs.len(), 1 << n);
        BinaryMeasure { n, probs }
    }
}

impl RationalMeasure {
    /// Exact rational weights from integer proportions.
    pub fn from_integers(n: usize, weights: &[i64]) -> Result<Self> {
        Self::from_weights(n, weights.iter().map(|&w| Rational::from_ratio(w, 1)).collect())
    }

    /// Exact conversion of a float measure (every finite double is rational).
    pub fn from_float(m: &FloatMeasure) -> Result<Self> {
        let probs = m
            .probs
            .iter()
            .map(|p| {
                Rational::from_float(*p)
                    .ok_or_else(|| Error::InvalidMeasure(format!("non-finite weight {p}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_weights(m.n, probs)
    }
}

/// A measure in either backend, for callers that pick the backend at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMeasure {
    Rational(RationalMeasure),
    Float(FloatMeasure),
}

/// Binds the inner measure of an [`AnyMeasure`] and evaluates a generic
/// expression on it.
#[macro_export]
macro_rules! with_measure {
    ($m:expr, $mu:ident => $body:expr) => {
        match $m {
            $crate::AnyMeasure::Rational($mu) => $body,
            $crate::AnyMeasure::Float($mu) => $body,
        }
    };
}

impl AnyMeasure {
    pub fn n(&self) -> usize {
        with_measure!(self, mu => mu.n())
    }

    pub fn backend(&self) -> crate::Backend {
        match self {
            AnyMeasure::Rational(_) => crate::Backend::Rational,
            AnyMeasure::Float(_) => crate::Backend::Float,
        }
    }

    pub fn to_float(&self) -> FloatMeasure {
        with_measure!(self, mu => mu.to_float())
    }

    /// Converts to the requested backend (float to rational is exact).
    pub fn into_backend(self, backend: crate::Backend) -> Result<Self> {
        Ok(match (self, backend) {
            (AnyMeasure::Float(m), crate::Backend::Rational) => AnyMeasure::Rational(RationalMeasure::from_float(&m)?),
            (AnyMeasure::Rational(m), crate::Backend::Float) => AnyMeasure::Float(m.to_float()),
            (m, _) => m,
        })
    }

    /// Probabilities rendered canonically (`p/q` or shortest float).
    pub fn rendered(&self) -> Vec<String> {
        with_measure!(self, mu => mu.probs().iter().map(|p| p.render()).collect())
    }
}

impl From<RationalMeasure> for AnyMeasure {
    fn from(m: RationalMeasure) -> Self {
        AnyMeasure::Rational(m)
    }
}

impl From<FloatMeasure> for AnyMeasure {
    fn from(m: FloatMeasure) -> Self {
        AnyMeasure::Float(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::ratio;

    #[test]
    fn normalizes_integer_weights() {
        let m = RationalMeasure::from_integers(1, &[1, 3]).unwrap();
        assert_eq!(m.prob(1), &ratio(3, 4));
        assert_eq!(m.marginal(0), ratio(3, 4));
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(RationalMeasure::from_integers(1, &[0, 0]).is_err());
        assert!(RationalMeasure::from_integers(1, &[-1, 2]).is_err());
        assert!(RationalMeasure::from_integers(2, &[1, 2]).is_err());
        assert!(FloatMeasure::from_probs(1, vec![0.5, 0.6]).is_err());
        assert!(FloatMeasure::from_probs(1, vec![0.5, 0.5 + 1e-12]).is_ok());
    }

    #[test]
    fn product_covariance_is_zero() {
        let m = RationalMeasure::product_bernoulli(&[ratio(1, 3), ratio(3, 4)]).unwrap();
        assert_eq!(m.covariance(0, 1), ratio(0, 1));
        assert_eq!(m.rank_weights(), vec![ratio(1, 6), ratio(7, 12), ratio(1, 4)]);
    }

    #[test]
    fn exchangeability_detection() {
        assert!(RationalMeasure::uniform(3).unwrap().is_exchangeable());
        let m = RationalMeasure::from_integers(2, &[1, 1, 2, 1]).unwrap();
        assert!(!m.is_exchangeable());
    }
}
