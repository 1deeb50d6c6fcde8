//! Rank-sequence properties of a measure.

use super::stochastic::{stochastic_covers, stochastic_dominates, DominanceMode};
use super::{PropertyReport, Witness};
use crate::error::{check_rank, Result};
use crate::lattice::MAX_ENUM_RANK;
use crate::measure::BinaryMeasure;
use crate::ops::truncate;
use crate::seq::binomial_row;
use crate::weight::{Ring, Weight};

/// First ULC violation of `a_0..a_n` computed in a scaled ring.
pub(crate) fn ulc_violation<R: Ring>(a: &[R]) -> Option<usize> {
    let n = a.len() - 1;
    let first = a.iter().position(|x| !x.is_exact_zero())?;
    let last = a.iter().rposition(|x| !x.is_exact_zero())?;
    if let Some(k) = (first..=last).find(|&k| a[k].is_exact_zero()) {
        return Some(k);
    }
    let b = binomial_row(n);
    (1..n).find(|&k| {
        let lhs = a[k].mul(&a[k]).mul(&R::from_u64(b[k - 1] * b[k + 1]));
        let rhs = a[k - 1].mul(&a[k + 1]).mul(&R::from_u64(b[k] * b[k]));
        rhs.exceeds(&lhs)
    })
}

/// ULC of the rank sequence.
pub fn check_ulc<W: Weight>(mu: &BinaryMeasure<W>) -> PropertyReport {
    let a = W::scale_all(&mu.rank_weights());
    let witness = ulc_violation(&a).map(|index| Witness::Sequence { projection: (0..mu.n()).collect(), index });
    PropertyReport::from_witness("ulc", witness)
}

/// `(μ | ΣX = k') ⪰ (μ | ΣX = k)` for consecutive nonempty rank levels
/// `k < k'`; with `cover`, covering instead of domination.
pub fn conditional_rank_monotone<W: Weight>(mu: &BinaryMeasure<W>, cover: bool) -> Result<PropertyReport> {
    let n = mu.n();
    check_rank(n, MAX_ENUM_RANK, "conditional rank monotonicity")?;
    let name = if cover { "rank-cover" } else { "rank-monotone" };
    let a = mu.rank_weights();
    let levels: Vec<usize> = (0..=n).filter(|&k| !a[k].is_zero()).collect();
    for w in levels.windows(2) {
        let lo = truncate(mu, w[0], w[0])?;
        let hi = truncate(mu, w[1], w[1])?;
        let inner = if cover { stochastic_covers(&hi, &lo)? } else { stochastic_dominates(&hi, &lo, DominanceMode::Auto)? };
        if inner.fails_p() {
            return Ok(PropertyReport::fails(
                name,
                Witness::RankLevels { lower: w[0], upper: w[1], inner: Box::new(inner) },
            ));
        }
    }
    Ok(PropertyReport::holds(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::RationalMeasure;
    use crate::weight::ratio;

    #[test]
    fn product_rank_levels_increase() {
        let m = RationalMeasure::product_bernoulli(&[ratio(1, 3), ratio(1, 2), ratio(3, 4)]).unwrap();
        assert!(check_ulc(&m).holds_p());
        assert!(conditional_rank_monotone(&m, false).unwrap().holds_p());
    }

    #[test]
    fn five_point_rank_levels_fail() {
        // support 000, 001, 010, 100, 110 written X1X2X3
        let m = RationalMeasure::from_sparse(3, [0, 4, 2, 1, 3].map(|i| (i, ratio(1, 5)))).unwrap();
        let r = conditional_rank_monotone(&m, false).unwrap();
        assert!(matches!(r.witness, Some(Witness::RankLevels { lower: 1, upper: 2, .. })));
    }

    #[test]
    fn flat_rank_sequence_is_not_ulc() {
        let m = RationalMeasure::from_integers(2, &[2, 1, 1, 2]).unwrap();
        assert_eq!(check_ulc(&m).witness, Some(Witness::Sequence { projection: vec![0, 1], index: 1 }));
    }
}
