//! Positive and negative lattice conditions, plain and hereditary.

use rayon::prelude::*;

use super::{marginal, subsets_canonical, vars_of, PropertyReport, Sign, Witness};
use crate::error::{check_rank, Result};
use crate::measure::BinaryMeasure;
use crate::weight::{Ring, Weight};

pub const MAX_LATTICE_RANK: usize = 12;
pub const MAX_HEREDITARY_RANK: usize = 10;

/// First incomparable pair `x < y` (as integers) violating the condition.
pub(crate) fn lattice_violation<R: Ring>(p: &[R], n: usize, sign: Sign) -> Option<(usize, usize)> {
    let size = 1usize << n;
    for x in 0..size {
        for y in x + 1..size {
            if x & y == x || x & y == y {
                continue;
            }
            let lhs = p[x | y].mul(&p[x & y]);
            let rhs = p[x].mul(&p[y]);
            let bad = match sign {
                Sign::Negative => lhs.exceeds(&rhs),
                Sign::Positive => rhs.exceeds(&lhs),
            };
            if bad {
                return Some((x, y));
            }
        }
    }
    None
}

pub fn property_name(sign: Sign, hereditary: bool) -> &'static str {
    match (sign, hereditary) {
        (Sign::Negative, false) => "nlc",
        (Sign::Negative, true) => "hnlc",
        (Sign::Positive, false) => "plc",
        (Sign::Positive, true) => "hplc",
    }
}

/// `μ(x∨y)μ(x∧y) ≤ μ(x)μ(y)` (negative) or `≥` (positive) over all pairs;
/// the hereditary form checks every projection as well.
pub fn check_lattice<W: Weight>(mu: &BinaryMeasure<W>, sign: Sign, hereditary: bool) -> Result<PropertyReport> {
    let n = mu.n();
    let name = property_name(sign, hereditary);
    if hereditary {
        check_rank(n, MAX_HEREDITARY_RANK, "hereditary lattice condition")?;
    } else {
        check_rank(n, MAX_LATTICE_RANK, "lattice condition")?;
    }
    let p = mu.scaled();
    Ok(PropertyReport::from_witness(name, lattice_witness(&p, n, sign, hereditary)))
}

pub(crate) fn lattice_witness<R: Ring>(p: &[R], n: usize, sign: Sign, hereditary: bool) -> Option<Witness> {
    if !hereditary {
        return lattice_violation(p, n, sign).map(|(x, y)| Witness::LatticePair {
            projection: (0..n).collect(),
            x,
            y,
        });
    }
    subsets_canonical(n)
        .into_par_iter()
        .filter(|s| s.count_ones() >= 2)
        .find_map_first(|s| {
            let vars = vars_of(s);
            let q = marginal(p, &vars);
            lattice_violation(&q, vars.len(), sign)
                .map(|(x, y)| Witness::LatticePair { projection: vars.clone(), x, y })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::RationalMeasure;
    use crate::weight::ratio;

    #[test]
    fn product_measures_satisfy_both_signs() {
        let m = RationalMeasure::product_bernoulli(&[ratio(1, 3), ratio(1, 5), ratio(2, 7)]).unwrap();
        for sign in [Sign::Positive, Sign::Negative] {
            assert!(check_lattice(&m, sign, true).unwrap().holds_p());
        }
    }

    #[test]
    fn uniform_on_rank_one_is_nlc_not_plc() {
        let m = RationalMeasure::from_integers(2, &[0, 1, 1, 0]).unwrap();
        assert!(check_lattice(&m, Sign::Negative, false).unwrap().holds_p());
        let r = check_lattice(&m, Sign::Positive, false).unwrap();
        assert_eq!(r.witness, Some(Witness::LatticePair { projection: vec![0, 1], x: 1, y: 2 }));
    }

    #[test]
    fn rank_guard() {
        let m = crate::measure::FloatMeasure::uniform(11).unwrap();
        assert!(check_lattice(&m, Sign::Negative, true).is_err());
        assert!(check_lattice(&m, Sign::Negative, false).unwrap().holds_p());
    }
}
