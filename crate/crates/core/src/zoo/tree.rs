//! Binary-tree representation of the closed class built from Bernoulli
//! laws by products and rank rescalings.

use rand::Rng;

use crate::error::{Error, Result};
use crate::measure::BinaryMeasure;
use crate::ops::{product, rank_rescale, LogConcaveWeights};
use crate::seq::is_log_concave;
use crate::weight::{ratio, Rational, Weight};

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureTree {
    /// Bernoulli law of one variable.
    Leaf(Rational),
    /// Rank rescaling by `q` of the product of the two subtree measures;
    /// `q` has one entry per rank `0..=leaves`.
    Internal { left: Box<MeasureTree>, right: Box<MeasureTree>, q: Vec<Rational> },
}

/// Measure of a tree plus the rank sequence of every node, in post-order.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeBuild<W: Weight> {
    pub measure: BinaryMeasure<W>,
    pub node_rank_sequences: Vec<Vec<W>>,
}

impl MeasureTree {
    pub fn leaf(p: Rational) -> Self {
        MeasureTree::Leaf(p)
    }

    pub fn join(left: MeasureTree, right: MeasureTree, q: Vec<Rational>) -> Self {
        MeasureTree::Internal { left: Box::new(left), right: Box::new(right), q }
    }

    pub fn leaves(&self) -> usize {
        match self {
            MeasureTree::Leaf(_) => 1,
            MeasureTree::Internal { left, right, .. } => left.leaves() + right.leaves(),
        }
    }

    /// Checks leaf parameters and node sequence lengths and log-concavity.
    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureTree::Leaf(p) => {
                if p.is_negative() || p > &ratio(1, 1) {
                    return Err(Error::InvalidArgument(format!("leaf parameter {} outside [0,1]", p.render())));
                }
                Ok(())
            }
            MeasureTree::Internal { left, right, q } => {
                left.validate()?;
                right.validate()?;
                let m = self.leaves();
                if q.len() != m + 1 {
                    return Err(Error::LengthMismatch { expected: m + 1, got: q.len() });
                }
                if let Some(k) = is_log_concave(q)? {
                    return Err(Error::NotLogConcave(k));
                }
                Ok(())
            }
        }
    }

    /// Random tree with `leaves` leaves: uniform random split sizes,
    /// leaf parameters in `{1/10, .., 9/10}`, node sequences with random
    /// interval support and nonincreasing successive ratios.
    pub fn random<R: Rng + ?Sized>(leaves: usize, rng: &mut R) -> Result<Self> {
        if leaves == 0 {
            return Err(Error::InvalidArgument("a tree needs at least one leaf".into()));
        }
        Ok(random_tree(leaves, rng))
    }
}

fn random_tree<R: Rng + ?Sized>(leaves: usize, rng: &mut R) -> MeasureTree {
    random_tree_with_support(leaves, rng).0
}

// also returns the interval of ranks carrying mass
fn random_tree_with_support<R: Rng + ?Sized>(leaves: usize, rng: &mut R) -> (MeasureTree, usize, usize) {
    if leaves == 1 {
        return (MeasureTree::Leaf(ratio(rng.gen_range(1..10), 10)), 0, 1);
    }
    let k = rng.gen_range(1..leaves);
    let (left, l0, l1) = random_tree_with_support(k, rng);
    let (right, r0, r1) = random_tree_with_support(leaves - k, rng);
    let (q, a, b) = random_log_concave(leaves, l0 + r0, l1 + r1, rng);
    (MeasureTree::join(left, right, q), a.max(l0 + r0), b.min(l1 + r1))
}

/// Log-concave weights on `0..=m` whose support `[a, b]` meets `[lo, hi]`.
fn random_log_concave<R: Rng + ?Sized>(m: usize, lo: usize, hi: usize, rng: &mut R) -> (Vec<Rational>, usize, usize) {
    // full support most of the time
    let (a, b) = if rng.gen_bool(0.7) {
        (0, m)
    } else {
        let a = rng.gen_range(0..=hi);
        (a, rng.gen_range(a.max(lo)..=m))
    };
    let mut ratios: Vec<Rational> = (a..b).map(|_| ratio(rng.gen_range(1..=20), rng.gen_range(1..=20))).collect();
    ratios.sort_by(|x, y| y.cmp(x));
    let mut q = vec![ratio(0, 1); m + 1];
    q[a] = ratio(1, 1);
    for (j, r) in (a..b).zip(&ratios) {
        q[j + 1] = &q[j] * r;
    }
    (q, a, b)
}

/// Bottom-up product and rank rescaling; variables follow leaf order.
pub fn tree_class_measure<W: Weight>(t: &MeasureTree) -> Result<TreeBuild<W>> {
    t.validate()?;
    let mut seqs = Vec::new();
    let measure = build(t, &mut seqs)?;
    Ok(TreeBuild { measure, node_rank_sequences: seqs })
}

fn build<W: Weight>(t: &MeasureTree, seqs: &mut Vec<Vec<W>>) -> Result<BinaryMeasure<W>> {
    let mu = match t {
        MeasureTree::Leaf(p) => BinaryMeasure::product_bernoulli(&[W::from_rational(p)])?,
        MeasureTree::Internal { left, right, q } => {
            let l = build(left, seqs)?;
            let r = build(right, seqs)?;
            let q = LogConcaveWeights::forced(q.iter().map(W::from_rational).collect())?;
            rank_rescale(&product(&l, &r)?, &q)?
        }
    };
    seqs.push(mu.rank_weights());
    Ok(mu)
}
