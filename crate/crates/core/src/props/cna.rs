//! Conditional negative association.

use rayon::prelude::*;

use super::association::disjoint_violation;
use super::{assignment_pairs, assignments_canonical, restrict, PropertyReport, Sign, Witness};
use crate::error::{check_rank, Result};
use crate::measure::BinaryMeasure;
use crate::weight::{Ring, Weight};

pub const MAX_CNA_RANK: usize = 6;

pub(crate) fn cna_witness<R: Ring>(p: &[R], n: usize) -> Option<Witness> {
    assignments_canonical(n)
        .into_par_iter()
        .filter(|(fixed, _)| n - (fixed.count_ones() as usize) >= 2)
        .find_map_first(|(fixed, ones)| {
            let (free, q) = restrict(p, n, fixed, ones);
            if q.iter().all(|v| v.is_exact_zero()) {
                return None;
            }
            disjoint_violation(&q, free.len(), Sign::Negative)
                .map(|hit| hit.witness(n, &free, assignment_pairs(n, fixed, ones)))
        })
}

/// Negative association of μ and of every positive-probability
/// conditioning on the values of some of the variables.
pub fn check_cna<W: Weight>(mu: &BinaryMeasure<W>) -> Result<PropertyReport> {
    check_rank(mu.n(), MAX_CNA_RANK, "conditional negative association")?;
    Ok(PropertyReport::from_witness("cna", cna_witness(&mu.scaled(), mu.n())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::RationalMeasure;
    use crate::weight::ratio;

    #[test]
    fn product_is_cna() {
        let m = RationalMeasure::product_bernoulli(&[ratio(1, 3), ratio(1, 2), ratio(3, 4)]).unwrap();
        assert!(check_cna(&m).unwrap().holds_p());
    }

    #[test]
    fn conditioning_exposes_positive_pair() {
        // Example 2 at ε = 1/1000: negatively associated, but not after conditioning
        let m = RationalMeasure::from_integers(3, &[0, 1000, 1000, 10, 1000, 1000, 10, 1]).unwrap();
        assert!(crate::props::check_association(&m, Sign::Negative, true).unwrap().holds_p());
        let r = check_cna(&m).unwrap();
        match &r.witness {
            Some(Witness::Association { conditioning, .. }) => assert!(!conditioning.is_empty()),
            other => panic!("unexpected {other:?}"),
        }
        assert!(r.recheck(&m).unwrap());
    }
}
