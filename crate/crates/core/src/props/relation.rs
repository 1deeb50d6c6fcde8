//! Stochastic ordering between conditional laws on totally ordered sets.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::weight::Weight;

/// Joint law of two random variables with values in finite chains.
///
/// Rows index the values of `X` in increasing order, columns those of `Y`.
/// Labels are cosmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedJointLaw<W: Weight> {
    p: Vec<Vec<W>>,
    pub x_labels: Option<Vec<String>>,
    pub y_labels: Option<Vec<String>>,
}

impl<W: Weight> OrderedJointLaw<W> {
    /// Normalizes a rectangular table of nonnegative weights.
    pub fn new(p: Vec<Vec<W>>) -> Result<Self> {
        let cols = p.first().map(|r| r.len()).unwrap_or(0);
        if p.is_empty() || cols == 0 {
            return Err(Error::InvalidArgument("empty support".into()));
        }
        if p.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged joint table".into()));
        }
        if p.iter().flatten().any(|x| x.is_negative()) {
            return Err(Error::InvalidArgument("negative joint probability".into()));
        }
        let total = p.iter().flatten().fold(W::zero(), |a, x| a.add(x));
        if total.is_zero() {
            return Err(Error::InvalidArgument("joint table has no mass".into()));
        }
        let p = p.into_iter().map(|r| r.into_iter().map(|x| x.div(&total)).collect()).collect();
        Ok(OrderedJointLaw { p, x_labels: None, y_labels: None })
    }

    pub fn rows(&self) -> &[Vec<W>] {
        &self.p
    }

    pub fn nx(&self) -> usize {
        self.p.len()
    }

    pub fn ny(&self) -> usize {
        self.p[0].len()
    }

    pub fn prob(&self, i: usize, j: usize) -> &W {
        &self.p[i][j]
    }

    /// Law of `X`.
    pub fn x_marginal(&self) -> Vec<W> {
        self.p.iter().map(|r| r.iter().fold(W::zero(), |a, x| a.add(x))).collect()
    }

    /// Law of `Y`.
    pub fn y_marginal(&self) -> Vec<W> {
        (0..self.ny())
            .map(|j| self.p.iter().fold(W::zero(), |a, r| a.add(&r[j])))
            .collect()
    }

    /// The law of `(Y, X)`.
    pub fn transpose(&self) -> Self {
        let p = (0..self.ny()).map(|j| self.p.iter().map(|r| r[j].clone()).collect()).collect();
        OrderedJointLaw { p, x_labels: self.y_labels.clone(), y_labels: self.x_labels.clone() }
    }
}

/// The four directional verdicts of [`stoch_relation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Relations {
    /// X is stochastically increasing in Y.
    pub x_up_y: bool,
    /// X is stochastically decreasing in Y.
    pub x_down_y: bool,
    /// Y is stochastically increasing in X.
    pub y_up_x: bool,
    /// Y is stochastically decreasing in X.
    pub y_down_x: bool,
}

/// Compares the upper tails of two unnormalized laws on a chain.
/// Returns `(hi ⪰ lo, hi ⪯ lo)` after normalization.
fn tail_order<W: Weight>(hi: &[W], lo: &[W]) -> (bool, bool) {
    let mh = hi.iter().fold(W::zero(), |a, x| a.add(x));
    let ml = lo.iter().fold(W::zero(), |a, x| a.add(x));
    let (mut th, mut tl) = (W::zero(), W::zero());
    let (mut ge, mut le) = (true, true);
    for t in (1..hi.len()).rev() {
        th = th.add(&hi[t]);
        tl = tl.add(&lo[t]);
        // P(≥t | hi) vs P(≥t | lo), cross-multiplied
        match th.mul(&ml).cmp_weak(&tl.mul(&mh)) {
            Ordering::Less => ge = false,
            Ordering::Greater => le = false,
            Ordering::Equal => {}
        }
    }
    (ge, le)
}

/// Verdicts for "column variable increasing/decreasing in row variable".
fn row_monotonicity<W: Weight>(rows: &[Vec<W>]) -> (bool, bool) {
    let live: Vec<&Vec<W>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let (mut up, mut down) = (true, true);
    for i in 0..live.len() {
        for j in i + 1..live.len() {
            let (ge, le) = tail_order(live[j], live[i]);
            up &= ge;
            down &= le;
        }
    }
    (up, down)
}

/// Evaluates `X↑Y`, `X↓Y`, `Y↑X`, `Y↓X` by comparing conditional tail
/// functions across every pair of positive-mass conditioning values.
pub fn stoch_relation<W: Weight>(law: &OrderedJointLaw<W>) -> Result<Relations> {
    let (y_up_x, y_down_x) = row_monotonicity(law.rows());
    let t = law.transpose();
    let (x_up_y, x_down_y) = row_monotonicity(t.rows());
    Ok(Relations { x_up_y, x_down_y, y_up_x, y_down_x })
}

/// Whether `mu` covers `nu` as laws on the chain `0 < 1 < 2 < ...`, i.e.
/// some coupling has `X ∈ {Y, Y+1}`. Inputs may be unnormalized and of
/// different lengths.
pub fn covers_on_chain<W: Weight>(mu: &[W], nu: &[W]) -> bool {
    let len = mu.len().max(nu.len()) + 1;
    let at = |s: &[W], i: usize| s.get(i).cloned().unwrap_or_else(W::zero);
    let mm = mu.iter().fold(W::zero(), |a, x| a.add(x));
    let mn = nu.iter().fold(W::zero(), |a, x| a.add(x));
    // F_mu(t) <= F_nu(t) and F_mu(t) >= F_nu(t-1), cross-multiplied
    let (mut fm, mut fn_, mut fn_prev) = (W::zero(), W::zero(), W::zero());
    for t in 0..len {
        fm = fm.add(&at(mu, t));
        fn_ = fn_.add(&at(nu, t));
        let a = fm.mul(&mn);
        if a.cmp_weak(&fn_.mul(&mm)) == Ordering::Greater {
            return false;
        }
        if a.cmp_weak(&fn_prev.mul(&mm)) == Ordering::Less {
            return false;
        }
        fn_prev = fn_.clone();
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{ratio, Rational};

    fn table(rows: &[&[i64]]) -> OrderedJointLaw<Rational> {
        OrderedJointLaw::new(rows.iter().map(|r| r.iter().map(|&x| ratio(x, 1)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn forty_cell_table() {
        let law = table(&[&[9, 4, 6, 1], &[1, 6, 4, 9]]);
        let r = stoch_relation(&law).unwrap();
        assert!(r.y_up_x);
        assert!(!r.x_up_y);
    }

    #[test]
    fn independent_law_is_monotone_both_ways() {
        let r = stoch_relation(&table(&[&[1, 2, 3], &[2, 4, 6]])).unwrap();
        assert!(r.x_up_y && r.x_down_y && r.y_up_x && r.y_down_x);
    }

    #[test]
    fn chain_covering() {
        let r = |v: &[i64]| v.iter().map(|&x| ratio(x, 1)).collect::<Vec<_>>();
        assert!(covers_on_chain(&r(&[0, 1]), &r(&[1, 0])));
        assert!(!covers_on_chain(&r(&[0, 0, 1]), &r(&[1, 0, 0])));
        assert!(!covers_on_chain(&r(&[1, 0]), &r(&[0, 1])));
        assert!(covers_on_chain(&r(&[1, 1]), &r(&[1, 1])));
    }

    #[test]
    fn rejects_empty() {
        assert!(OrderedJointLaw::<Rational>::new(vec![]).is_err());
        assert!(OrderedJointLaw::<Rational>::new(vec![vec![ratio(0, 1)]]).is_err());
    }
}
