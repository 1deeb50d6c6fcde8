//! Pairwise negative correlation.

use std::cmp::Ordering;

use super::{PropertyReport, Witness};
use crate::error::{Error, Result};
use crate::measure::BinaryMeasure;
use crate::weight::{Ring, Weight};

/// Scaled covariance numerator `Z·s(e∧f) − s(e)s(f)` for every pair `e < f`.
pub(crate) fn scaled_covariances<R: Ring>(p: &[R], n: usize) -> Vec<((usize, usize), R)> {
    let z = super::total(p);
    let mut single = vec![R::zero(); n];
    let mut pair = vec![vec![R::zero(); n]; n];
    for (x, v) in p.iter().enumerate() {
        if v.is_exact_zero() {
            continue;
        }
        for e in 0..n {
            if x >> e & 1 == 1 {
                single[e].add_assign(v);
                for f in e + 1..n {
                    if x >> f & 1 == 1 {
                        pair[e][f].add_assign(v);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for e in 0..n {
        for f in e + 1..n {
            out.push(((e, f), z.mul(&pair[e][f]).sub(&single[e].mul(&single[f]))));
        }
    }
    out
}

/// First pair with positive covariance, if any.
pub(crate) fn nc_violation<R: Ring>(p: &[R], n: usize) -> Option<(usize, usize)> {
    scaled_covariances(p, n)
        .into_iter()
        .find(|(_, c)| c.exceeds(&R::zero()))
        .map(|(pair, _)| pair)
}

/// `Cov(X_e, X_f) ≤ 0` for all pairs. A failing report names the pair with
/// the largest covariance; a passing one notes the largest value.
pub fn check_nc<W: Weight>(mu: &BinaryMeasure<W>) -> Result<PropertyReport> {
    let n = mu.n();
    if n < 2 {
        return Err(Error::InvalidArgument("negative correlation needs at least two variables".into()));
    }
    let mut worst: Option<((usize, usize), W)> = None;
    for e in 0..n {
        for f in e + 1..n {
            let c = mu.covariance(e, f);
            if worst.as_ref().map_or(true, |(_, w)| c.cmp_weak(w) == Ordering::Greater) {
                worst = Some(((e, f), c));
            }
        }
    }
    let ((e, f), c) = worst.expect("n >= 2");
    let violated = match W::BACKEND {
        crate::Backend::Rational => c.cmp_weak(&W::zero()) == Ordering::Greater,
        crate::Backend::Float => c.to_f64() > crate::weight::FLOAT_TOLERANCE,
    };
    if violated {
        Ok(PropertyReport::fails("nc", Witness::Covariance { e, f, covariance: c.render() }))
    } else {
        Ok(PropertyReport::holds("nc").with_note(format!("max covariance {} at ({e}, {f})", c.render())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::RationalMeasure;
    use crate::weight::ratio;

    #[test]
    fn spanning_trees_of_triangle() {
        let m = RationalMeasure::from_integers(3, &[0, 0, 0, 1, 0, 1, 1, 0]).unwrap();
        assert_eq!(m.covariance(0, 1), ratio(-1, 9));
        assert!(check_nc(&m).unwrap().holds_p());
    }

    #[test]
    fn positive_pair_is_reported() {
        let m = RationalMeasure::from_integers(2, &[1, 0, 0, 1]).unwrap();
        let r = check_nc(&m).unwrap();
        assert_eq!(r.witness, Some(Witness::Covariance { e: 0, f: 1, covariance: "1/4".into() }));
        assert!(check_nc(&RationalMeasure::uniform(1).unwrap()).is_err());
    }
}
