//! Markov chains of ordered variables and the parity rule for monotone links.

use super::relation::{stoch_relation, OrderedJointLaw};
use super::{PropertyReport, Witness};
use crate::error::{Error, Result};
use crate::weight::Weight;

/// Joint law of `Y_1, …, Y_m`, each on `0..sizes[k]`, stored row-major
/// with `Y_1` varying slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainLaw<W: Weight> {
    sizes: Vec<usize>,
    p: Vec<W>,
}

impl<W: Weight> ChainLaw<W> {
    pub fn new(sizes: Vec<usize>, p: Vec<W>) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::InvalidArgument("a chain needs at least two nonempty variables".into()));
        }
        let len: usize = sizes.iter().product();
        if p.len() != len {
            return Err(Error::LengthMismatch { expected: len, got: p.len() });
        }
        if p.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidMeasure("negative probability".into()));
        }
        let z = p.iter().fold(W::zero(), |acc, w| acc.add(w));
        if z.is_zero() {
            return Err(Error::InvalidMeasure("zero total mass".into()));
        }
        Ok(ChainLaw { p: p.iter().map(|w| w.div(&z)).collect(), sizes })
    }

    /// Markov chain glued from consecutive pair laws `(Y_k, Y_{k+1})`.
    pub fn from_links(links: &[OrderedJointLaw<W>]) -> Result<Self> {
        let first = links.first().ok_or_else(|| Error::InvalidArgument("no links".into()))?;
        for (k, w) in links.windows(2).enumerate() {
            let ok = w[0].ny() == w[1].nx()
                && w[0].y_marginal().iter().zip(w[1].x_marginal()).all(|(a, b)| a.cmp_weak(&b).is_eq());
            if !ok {
                return Err(Error::InvalidArgument(format!("inconsistent marginals between links {} and {}", k + 1, k + 2)));
            }
        }
        let mut sizes = vec![first.nx()];
        sizes.extend(links.iter().map(|l| l.ny()));
        let mut p: Vec<W> = first.rows().iter().flatten().cloned().collect();
        for link in &links[1..] {
            let marg = link.x_marginal();
            let mut next = Vec::with_capacity(p.len() * link.ny());
            for (idx, w) in p.iter().enumerate() {
                let last = idx % link.nx();
                for j in 0..link.ny() {
                    next.push(if marg[last].is_zero() { W::zero() } else { w.mul(link.prob(last, j)).div(&marg[last]) });
                }
            }
            p = next;
        }
        Self::new(sizes, p)
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn digits(&self, mut idx: usize) -> Vec<usize> {
        let mut d = vec![0; self.sizes.len()];
        for k in (0..self.sizes.len()).rev() {
            d[k] = idx % self.sizes[k];
            idx /= self.sizes[k];
        }
        d
    }

    /// Joint law of `(Y_i, Y_j)`, 0-based.
    pub fn pair_law(&self, i: usize, j: usize) -> Result<OrderedJointLaw<W>> {
        if i >= self.len() || j >= self.len() || i == j {
            return Err(Error::InvalidArgument(format!("bad pair ({i}, {j})")));
        }
        let mut t = vec![vec![W::zero(); self.sizes[j]]; self.sizes[i]];
        for (idx, w) in self.p.iter().enumerate() {
            let d = self.digits(idx);
            t[d[i]][d[j]] = t[d[i]][d[j]].add(w);
        }
        OrderedJointLaw::new(t)
    }

    fn marginal(&self, k: usize) -> Vec<W> {
        let mut m = vec![W::zero(); self.sizes[k]];
        for (idx, w) in self.p.iter().enumerate() {
            let d = self.digits(idx)[k];
            m[d] = m[d].add(w);
        }
        m
    }

    /// First `k` (0-based, interior) at which the chain fails the Markov property.
    ///
    /// The law is Markov iff `p(y) Π_{interior k} P(y_k) = Π_k P(y_k, y_{k+1})`.
    pub fn markov_violation(&self) -> Option<usize> {
        let m = self.len();
        let pairs: Vec<OrderedJointLaw<W>> = (0..m - 1).map(|k| self.pair_law(k, k + 1).expect("valid pair")).collect();
        let margs: Vec<Vec<W>> = (0..m).map(|k| self.marginal(k)).collect();
        // check prefix by prefix so the reported index is the first offender
        for upto in 2..m {
            let sizes = &self.sizes[..=upto];
            let tail: usize = self.sizes[upto + 1..].iter().product();
            let mut prefix = vec![W::zero(); sizes.iter().product()];
            for (idx, w) in self.p.iter().enumerate() {
                prefix[idx / tail] = prefix[idx / tail].add(w);
            }
            let ok = prefix.iter().enumerate().all(|(idx, w)| {
                let d = self.digits(idx * tail);
                let mut lhs = w.clone();
                let mut rhs = pairs[0].prob(d[0], d[1]).clone();
                for k in 1..upto {
                    lhs = lhs.mul(&margs[k][d[k]]);
                    rhs = rhs.mul(pairs[k].prob(d[k], d[k + 1]));
                }
                lhs.cmp_weak(&rhs).is_eq()
            });
            if !ok {
                return Some(upto - 1);
            }
        }
        None
    }

    pub fn is_markov(&self) -> bool {
        self.markov_violation().is_none()
    }
}

/// Checks the Markov property, monotonicity of every link, and that `Y_m`
/// is increasing in `Y_1` iff the number of decreasing links is even.
pub fn check_markov_monotone<W: Weight>(chain: &ChainLaw<W>) -> Result<PropertyReport> {
    const NAME: &str = "markov-monotone";
    let fail = |reason: String| Ok(PropertyReport::fails(NAME, Witness::Markov { reason }));
    if let Some(k) = chain.markov_violation() {
        return fail(format!("not Markov at Y{}", k + 2));
    }
    let mut decreasing = 0usize;
    for k in 0..chain.len() - 1 {
        let r = stoch_relation(&chain.pair_law(k, k + 1)?)?;
        if r.y_up_x {
            continue;
        }
        if r.y_down_x {
            decreasing += 1;
        } else {
            return fail(format!("Y{} is neither increasing nor decreasing in Y{}", k + 2, k + 1));
        }
    }
    let ends = stoch_relation(&chain.pair_law(0, chain.len() - 1)?)?;
    let (ok, dir) = if decreasing % 2 == 0 { (ends.y_up_x, "increasing") } else { (ends.y_down_x, "decreasing") };
    if ok {
        Ok(PropertyReport::holds(NAME).with_note(format!("endpoints {dir} ({decreasing} decreasing links)")))
    } else {
        fail(format!("endpoints not {dir} despite {decreasing} decreasing links"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{ratio, Rational};

    fn law(rows: &[&[i64]]) -> OrderedJointLaw<Rational> {
        OrderedJointLaw::new(rows.iter().map(|r| r.iter().map(|&v| ratio(v, 1)).collect()).collect()).unwrap()
    }

    #[test]
    fn parity_rule() {
        let up = law(&[&[3, 1], &[1, 3]]);
        let down = law(&[&[1, 3], &[3, 1]]);
        let c = ChainLaw::from_links(&[up.clone(), up.clone()]).unwrap();
        assert!(c.is_markov());
        let r = check_markov_monotone(&c).unwrap();
        assert!(r.holds_p());
        assert!(r.note.unwrap().contains("increasing"));
        let c = ChainLaw::from_links(&[down.clone()]).unwrap();
        assert!(check_markov_monotone(&c).unwrap().note.unwrap().contains("decreasing"));
        let c = ChainLaw::from_links(&[up.clone(), down, up]).unwrap();
        assert!(check_markov_monotone(&c).unwrap().note.unwrap().contains("decreasing"));
    }

    #[test]
    fn detects_non_markov_joint() {
        // Y3 = Y1 while Y2 is an independent coin
        let p: Vec<Rational> = [1, 0, 1, 0, 0, 1, 0, 1].iter().map(|&v| ratio(v, 1)).collect();
        let c = ChainLaw::new(vec![2, 2, 2], p).unwrap();
        assert_eq!(c.markov_violation(), Some(1));
        assert!(check_markov_monotone(&c).unwrap().fails_p());
    }

    #[test]
    fn rejects_inconsistent_links() {
        let a = law(&[&[3, 1], &[1, 3]]);
        let b = law(&[&[1, 0], &[0, 3]]);
        assert!(ChainLaw::from_links(&[a, b]).is_err());
    }
}
