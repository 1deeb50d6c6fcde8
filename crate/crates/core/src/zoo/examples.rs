//! The worked examples, with atoms given as configuration strings.

use crate::error::{Error, Result};
use crate::lattice::Config;
use crate::measure::{BinaryMeasure, RationalMeasure};
use crate::props::OrderedJointLaw;
use crate::weight::{ratio, Rational, Weight};

/// Largest ε for which Example 1 is CNA.
pub const EXAMPLE1_CNA_RANGE_END: (i64, i64) = (4, 5);

/// Measure from `(config string, weight)` pairs; strings list `X1..Xn`
/// from left to right and missing configurations get weight zero.
pub fn from_table<W: Weight>(n: usize, entries: &[(&str, W)]) -> Result<BinaryMeasure<W>> {
    let mut atoms = Vec::with_capacity(entries.len());
    for (s, w) in entries {
        let c: Config = s.parse()?;
        if c.n() != n {
            return Err(Error::InvalidConfiguration(format!("`{s}` has {} variables, expected {n}", c.n())));
        }
        atoms.push((c.index(), w.clone()));
    }
    BinaryMeasure::from_sparse(n, atoms)
}

fn example1_with(eps: &Rational, p011: i64) -> Result<RationalMeasure> {
    if eps < &ratio(0, 1) {
        return Err(Error::InvalidArgument("ε must be nonnegative".into()));
    }
    let r = |v: i64| ratio(v, 1);
    from_table(
        3,
        &[
            ("000", r(16)),
            ("001", r(8)),
            ("010", r(8)),
            ("011", r(p011)),
            ("100", r(12) + eps),
            ("101", r(4)),
            ("110", r(4)),
            ("111", r(1)),
        ],
    )
}

/// Example 1 with `P(0,1,1) ∝ 4`. The printed table has 8 there, which is
/// not CNA for any ε; with 4 the measure is CNA exactly for `0 ≤ ε ≤ 4/5`.
pub fn example1(eps: &Rational) -> Result<RationalMeasure> {
    example1_with(eps, 4)
}

/// Example 1 exactly as printed (`P(0,1,1) ∝ 8`).
pub fn example1_as_printed(eps: &Rational) -> Result<RationalMeasure> {
    example1_with(eps, 8)
}

/// Example 2: NA, yet NLC fails on the `X2 = 1` face when `ε < 1/100`.
pub fn example2(eps: &Rational) -> Result<RationalMeasure> {
    if eps <= &ratio(0, 1) {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    let one = ratio(1, 1);
    let ten = ratio(10, 1) * eps;
    from_table(
        3,
        &[
            ("001", one.clone()),
            ("010", one.clone()),
            ("011", ten.clone()),
            ("100", one.clone()),
            ("101", one),
            ("110", ten),
            ("111", eps.clone()),
        ],
    )
}

/// The 2×4 table in fortieths: `Y` increasing in `X` but not conversely.
pub fn stoch_table() -> OrderedJointLaw<Rational> {
    let row = |v: [i64; 4]| v.iter().map(|&x| ratio(x, 40)).collect::<Vec<_>>();
    OrderedJointLaw::new(vec![row([9, 4, 6, 1]), row([1, 6, 4, 9])]).expect("valid table")
}

/// Uniform on `000, 001, 010, 100, 110`.
pub fn five_point() -> RationalMeasure {
    let w = ratio(1, 5);
    from_table(3, &[("000", w.clone()), ("001", w.clone()), ("010", w.clone()), ("100", w.clone()), ("110", w)])
        .expect("valid table")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{condition_projected, project, symmetrize};

    #[test]
    fn printed_example1_projection_and_ranks() {
        let m = example1_as_printed(&ratio(0, 1)).unwrap();
        let p = project(&m, &[1, 2]).unwrap();
        let z = ratio(61, 1);
        assert_eq!(p.probs(), &[ratio(28, 1) / &z, ratio(12, 1) / &z, ratio(12, 1) / &z, ratio(9, 1) / &z]);
        assert_eq!(symmetrize(&m).rank_weights(), vec![ratio(16, 61), ratio(28, 61), ratio(16, 61), ratio(1, 61)]);
    }

    #[test]
    fn example1_condition_on_first() {
        let m = example1(&ratio(0, 1)).unwrap();
        let c = condition_projected(&m, &[(0, true)]).unwrap();
        assert_eq!(c.probs(), &[ratio(12, 21), ratio(4, 21), ratio(4, 21), ratio(1, 21)]);
    }

    #[test]
    fn example2_condition_on_second() {
        let m = example2(&ratio(1, 20)).unwrap();
        let c = condition_projected(&m, &[(1, true)]).unwrap();
        let z = ratio(41, 20);
        let want = [ratio(1, 1), ratio(1, 2), ratio(1, 2), ratio(1, 20)].map(|w| w / &z);
        assert_eq!(c.probs(), &want);
    }
}
