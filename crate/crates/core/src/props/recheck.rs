//! Independent confirmation of failing reports from the measure alone.
//!
//! These routines recompute the offending inequality directly from the
//! atoms, without the scaled-ring machinery the checkers use.

use std::cmp::Ordering;

use super::{PropertyReport, Verdict, Witness};
use crate::error::{Error, Result};
use crate::lattice::{box_product, EventSet};
use crate::measure::BinaryMeasure;
use crate::ops::{apply_field, condition, project, truncate, ExternalField, FieldValue};
use crate::seq::is_ulc;
use crate::weight::Weight;

fn gt<W: Weight>(a: &W, b: &W) -> bool {
    a.cmp_weak(b) == Ordering::Greater
}

fn event<W: Weight>(mu: &BinaryMeasure<W>, members: &[usize]) -> Result<EventSet> {
    EventSet::from_indices(mu.n(), members.iter().copied())
}

fn mass<W: Weight>(mu: &BinaryMeasure<W>, members: &[usize]) -> Result<W> {
    mu.mass(&event(mu, members)?)
}

fn negative_sign(property: &str) -> bool {
    !matches!(property, "plc" | "hplc" | "pa" | "pa-disjoint")
}

fn parse_field<W: Weight>(strings: &[String]) -> Result<ExternalField<W>> {
    let entries = strings
        .iter()
        .map(|s| match s.as_str() {
            "0" => Ok(FieldValue::Zero),
            "inf" => Ok(FieldValue::Infinite),
            other => W::parse(other)
                .map(FieldValue::Finite)
                .ok_or_else(|| Error::Parse(format!("bad field entry `{other}`"))),
        })
        .collect::<Result<Vec<_>>>()?;
    ExternalField::new(entries)
}

impl PropertyReport {
    /// `Ok(true)` iff this failing report's witness violates the property
    /// on `mu`. Reports comparing two measures need [`Self::recheck_pair`].
    pub fn recheck<W: Weight>(&self, mu: &BinaryMeasure<W>) -> Result<bool> {
        if self.verdict != Verdict::Fails {
            return Err(Error::InvalidArgument("only failing reports carry a witness".into()));
        }
        let witness = self.witness.as_ref().ok_or_else(|| Error::InvalidArgument("missing witness".into()))?;
        let neg = negative_sign(&self.property);
        match witness {
            Witness::LatticePair { projection, x, y } => {
                let m = project(mu, projection)?;
                if x & y == *x || x & y == *y || (*x | *y) >= 1 << m.n() {
                    return Ok(false);
                }
                let lhs = m.prob(x | y).mul(m.prob(x & y));
                let rhs = m.prob(*x).mul(m.prob(*y));
                Ok(if neg { gt(&lhs, &rhs) } else { gt(&rhs, &lhs) })
            }
            Witness::Association { conditioning, block, f, g } => {
                let m = condition(mu, conditioning)?;
                let (ef, eg) = (event(&m, f)?, event(&m, g)?);
                if !ef.is_upset() || !eg.is_upset() {
                    return Ok(false);
                }
                let fixed: Vec<usize> = conditioning.iter().map(|&(j, _)| j).collect();
                let depends_only = |e: &EventSet, vars: &dyn Fn(usize) -> bool| {
                    (0..m.n()).filter(|&j| !vars(j)).all(|j| e.indices().all(|x| e.contains(x ^ 1 << j)))
                };
                let in_block = |j: usize| block.contains(&j);
                let disjoint = self.property != "pa";
                if disjoint
                    && (!depends_only(&ef, &in_block) || !depends_only(&eg, &|j| !in_block(j) && !fixed.contains(&j)))
                {
                    return Ok(false);
                }
                let joint = m.mass(&ef.intersection(&eg)?)?;
                let prod = m.mass(&ef)?.mul(&m.mass(&eg)?);
                Ok(if neg { gt(&joint, &prod) } else { gt(&prod, &joint) })
            }
            Witness::Regression { block, h, lower, upper } => {
                let n = mu.n();
                let cmask: usize = (0..n).filter(|j| !block.contains(j)).fold(0, |m, j| m | 1 << j);
                if lower & !cmask != 0 || upper & !cmask != 0 || lower & upper != *lower || lower == upper {
                    return Ok(false);
                }
                let he = event(mu, h)?;
                if !he.is_upset() {
                    return Ok(false);
                }
                let cell = |eta: usize| mu.mass_where(|x| x & cmask == eta);
                let hit = |eta: usize| mu.mass_where(|x| x & cmask == eta && he.contains(x));
                let (ml, mu_) = (cell(*lower), cell(*upper));
                if ml.is_zero() || mu_.is_zero() {
                    return Ok(false);
                }
                Ok(gt(&hit(*upper).mul(&ml), &hit(*lower).mul(&mu_)))
            }
            Witness::Covariance { e, f, .. } => {
                if *e >= mu.n() || *f >= mu.n() || e == f {
                    return Ok(false);
                }
                Ok(gt(&mu.covariance(*e, *f), &W::zero()))
            }
            Witness::BoxPair { a, b } => {
                let (ea, eb) = (event(mu, a)?, event(mu, b)?);
                let ab = mu.mass(&box_product(&ea, &eb)?)?;
                Ok(gt(&ab, &mu.mass(&ea)?.mul(&mu.mass(&eb)?)))
            }
            Witness::EdgeUpSet { event: members } => {
                let a = event(mu, members)?;
                if !a.is_upset() {
                    return Ok(false);
                }
                let ma = mu.mass(&a)?;
                Ok((0..mu.n()).all(|e| {
                    let joint = mu.mass_where(|x| x >> e & 1 == 1 && a.contains(x));
                    gt(&mu.marginal(e).mul(&ma), &joint)
                }))
            }
            Witness::Sequence { projection, index } => {
                let m = project(mu, projection)?;
                Ok(is_ulc(&m.rank_weights(), m.n())? == Some(*index))
            }
            Witness::RankLevels { lower, upper, inner } => {
                let lo = truncate(mu, *lower, *lower)?;
                let hi = truncate(mu, *upper, *upper)?;
                inner.recheck_pair(&hi, &lo)
            }
            Witness::Field { field, projection, inner } => {
                let f = parse_field::<W>(field)?;
                let reduced = project(&apply_field(mu, &f)?, projection)?;
                inner.recheck(&reduced)
            }
            Witness::UpSet { .. } | Witness::HallSet { .. } => {
                Err(Error::InvalidArgument("witness compares two measures".into()))
            }
            Witness::Markov { .. } => Err(Error::InvalidArgument("witness refers to a chain law".into())),
        }
    }

    /// Confirms a failed domination (`UpSet`) or covering (`HallSet`) of
    /// `nu` by `mu`.
    pub fn recheck_pair<W: Weight>(&self, mu: &BinaryMeasure<W>, nu: &BinaryMeasure<W>) -> Result<bool> {
        if self.verdict != Verdict::Fails {
            return Err(Error::InvalidArgument("only failing reports carry a witness".into()));
        }
        match self.witness.as_ref() {
            Some(Witness::UpSet { event: members }) => {
                let a = event(mu, members)?;
                Ok(a.is_upset() && gt(&nu.mass(&a)?, &mu.mass(&a)?))
            }
            Some(Witness::HallSet { set }) => {
                // everything μ puts on `set` must go to `set` or one step below
                let n = mu.n();
                let mut reach = EventSet::empty(n)?;
                for &x in set {
                    reach.insert(x);
                    for j in 0..n {
                        if x >> j & 1 == 1 {
                            reach.insert(x ^ 1 << j);
                        }
                    }
                }
                Ok(gt(&mass(mu, set)?, &nu.mass(&reach)?))
            }
            _ => Err(Error::InvalidArgument("witness does not compare two measures".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::measure::RationalMeasure;
    use crate::props::{check_association, check_lattice, check_nc, stochastic_covers, Sign};

    #[test]
    fn confirms_and_rejects() {
        let pos = RationalMeasure::from_integers(2, &[2, 1, 1, 2]).unwrap();
        let neg = RationalMeasure::from_integers(2, &[1, 2, 2, 1]).unwrap();
        for r in [
            check_nc(&pos).unwrap(),
            check_lattice(&pos, Sign::Negative, false).unwrap(),
            check_association(&pos, Sign::Negative, true).unwrap(),
        ] {
            assert!(r.recheck(&pos).unwrap(), "{r:?}");
            assert!(!r.recheck(&neg).unwrap(), "{r:?}");
        }
    }

    #[test]
    fn hall_set_confirms() {
        let hi = RationalMeasure::from_integers(2, &[1, 1, 1, 1]).unwrap();
        let lo = RationalMeasure::point_mass(2, 0).unwrap();
        let r = stochastic_covers(&hi, &lo).unwrap();
        assert!(r.recheck_pair(&hi, &lo).unwrap());
        assert!(r.recheck(&hi).is_err());
    }
}
