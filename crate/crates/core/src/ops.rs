//! Measure-to-measure closure operations.
//!
//! Variables are 0-based. Every operation renormalizes where needed and
//! returns a fresh measure; inputs are never modified.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{gather, scatter};
use crate::measure::{BinaryMeasure, FloatMeasure};
use crate::seq::{binomial_row, is_log_concave};
use crate::weight::Weight;

fn validate_vars(n: usize, vars: &[usize]) -> Result<Vec<usize>> {
    let mut v = vars.to_vec();
    v.sort_unstable();
    v.dedup();
    if let Some(&bad) = v.iter().find(|&&j| j >= n) {
        return Err(Error::InvalidArgument(format!("variable {bad} out of range for n = {n}")));
    }
    Ok(v)
}

/// Marginal law of the variables in `keep` (sorted ascending; output
/// variable `k` is the `k`-th smallest kept index).
pub fn project<W: Weight>(mu: &BinaryMeasure<W>, keep: &[usize]) -> Result<BinaryMeasure<W>> {
    let keep = validate_vars(mu.n(), keep)?;
    if keep.is_empty() {
        return Err(Error::InvalidArgument("projection onto no variables".into()));
    }
    let mut out = vec![W::zero(); 1 << keep.len()];
    for (x, p) in mu.probs().iter().enumerate() {
        if !p.is_zero() {
            let y = gather(x, &keep);
            out[y] = out[y].add(p);
        }
    }
    Ok(BinaryMeasure::from_parts_unchecked(keep.len(), out))
}

/// Partial 0/1 assignment, as `(variable, value)` pairs.
pub type Assignment = [(usize, bool)];

fn assignment_masks(n: usize, assignment: &Assignment) -> Result<(usize, usize)> {
    let (mut fixed, mut ones) = (0usize, 0usize);
    for &(j, b) in assignment {
        if j >= n {
            return Err(Error::InvalidArgument(format!("variable {j} out of range for n = {n}")));
        }
        if fixed >> j & 1 == 1 && (ones >> j & 1 == 1) != b {
            return Err(Error::InvalidArgument(format!("variable {j} assigned twice")));
        }
        fixed |= 1 << j;
        if b {
            ones |= 1 << j;
        }
    }
    Ok((fixed, ones))
}

/// Conditional law given the assignment; fixed coordinates stay in place
/// and become deterministic.
pub fn condition<W: Weight>(mu: &BinaryMeasure<W>, assignment: &Assignment) -> Result<BinaryMeasure<W>> {
    let (fixed, ones) = assignment_masks(mu.n(), assignment)?;
    let w: Vec<W> = mu
        .probs()
        .iter()
        .enumerate()
        .map(|(x, p)| if x & fixed == ones { p.clone() } else { W::zero() })
        .collect();
    BinaryMeasure::from_weights(mu.n(), w).map_err(|_| Error::ZeroMass)
}

/// Conditional law given the assignment, projected onto the unassigned
/// coordinates (in increasing order).
pub fn condition_projected<W: Weight>(
    mu: &BinaryMeasure<W>,
    assignment: &Assignment,
) -> Result<BinaryMeasure<W>> {
    let c = condition(mu, assignment)?;
    let (fixed, _) = assignment_masks(mu.n(), assignment)?;
    let free: Vec<usize> = (0..mu.n()).filter(|j| fixed >> j & 1 == 0).collect();
    if free.is_empty() {
        return Err(Error::InvalidArgument("no unassigned variables remain".into()));
    }
    project(&c, &free)
}

/// Independent coupling; the variables of `mu2` follow those of `mu1`.
pub fn product<W: Weight>(mu1: &BinaryMeasure<W>, mu2: &BinaryMeasure<W>) -> Result<BinaryMeasure<W>> {
    let n = mu1.n() + mu2.n();
    crate::error::check_rank(n, crate::measure::MAX_MEASURE_RANK, "measures")?;
    let mut out = Vec::with_capacity(1 << n);
    for q in mu2.probs() {
        for p in mu1.probs() {
            out.push(p.mul(q));
        }
    }
    Ok(BinaryMeasure::from_parts_unchecked(n, out))
}

/// `μ′{X_e = η(e)} = μ{X_e = η(π(e))}`.
pub fn relabel<W: Weight>(mu: &BinaryMeasure<W>, pi: &[usize]) -> Result<BinaryMeasure<W>> {
    let n = mu.n();
    let mut seen = vec![false; n];
    if pi.len() != n || pi.iter().any(|&j| j >= n || std::mem::replace(&mut seen[j], true)) {
        return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
    }
    let mut out = vec![W::zero(); 1 << n];
    for (z, p) in mu.probs().iter().enumerate() {
        out[scatter(z, pi)] = p.clone();
    }
    Ok(BinaryMeasure::from_parts_unchecked(n, out))
}

/// One coordinate of an external field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldValue<W> {
    Finite(W),
    /// The `W(e) → 0` limit, i.e. conditioning on `X_e = 0`.
    Zero,
    /// The `W(e) → ∞` limit, i.e. conditioning on `X_e = 1`.
    Infinite,
}

/// Per-variable odds reweighting `W(e)^{η(e)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExternalField<W: Weight> {
    entries: Vec<FieldValue<W>>,
}

impl<W: Weight> ExternalField<W> {
    pub fn new(entries: Vec<FieldValue<W>>) -> Result<Self> {
        for (j, e) in entries.iter().enumerate() {
            if let FieldValue::Finite(w) = e {
                if w.is_negative() || w.is_zero() {
                    return Err(Error::InvalidArgument(format!(
                        "field entry {j} must be positive, got {}",
                        w.render()
                    )));
                }
            }
        }
        Ok(ExternalField { entries })
    }

    pub fn finite(weights: Vec<W>) -> Result<Self> {
        Self::new(weights.into_iter().map(FieldValue::Finite).collect())
    }

    pub fn ones(n: usize) -> Self {
        ExternalField { entries: vec![FieldValue::Finite(W::one()); n] }
    }

    pub fn uniform(n: usize, w: W) -> Result<Self> {
        Self::finite(vec![w; n])
    }

    /// Replaces entry `j` with a limit marker or finite weight.
    pub fn with(mut self, j: usize, v: FieldValue<W>) -> Result<Self> {
        if j >= self.entries.len() {
            return Err(Error::InvalidArgument(format!("field index {j} out of range")));
        }
        self.entries[j] = v;
        Self::new(self.entries)
    }

    pub fn entries(&self) -> &[FieldValue<W>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has_limits(&self) -> bool {
        self.entries.iter().any(|e| !matches!(e, FieldValue::Finite(_)))
    }
}

/// Reweights by the field and renormalizes; limit markers condition.
pub fn apply_field<W: Weight>(mu: &BinaryMeasure<W>, field: &ExternalField<W>) -> Result<BinaryMeasure<W>> {
    let n = mu.n();
    if field.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: field.len() });
    }
    let (mut fixed, mut ones) = (0usize, 0usize);
    for (j, e) in field.entries().iter().enumerate() {
        match e {
            FieldValue::Zero => fixed |= 1 << j,
            FieldValue::Infinite => {
                fixed |= 1 << j;
                ones |= 1 << j;
            }
            FieldValue::Finite(_) => {}
        }
    }
    // cumulative products over subsets of the finitely weighted coordinates
    let mut weight = vec![W::one(); 1 << n];
    for (j, e) in field.entries().iter().enumerate() {
        if let FieldValue::Finite(w) = e {
            if w.cmp_weak(&W::one()) == Ordering::Equal && W::BACKEND == crate::Backend::Rational {
                continue;
            }
            for x in 0..1usize << n {
                if x >> j & 1 == 1 {
                    weight[x] = weight[x].mul(w);
                }
            }
        }
    }
    let w: Vec<W> = mu
        .probs()
        .iter()
        .enumerate()
        .map(|(x, p)| if x & fixed == ones && !p.is_zero() { p.mul(&weight[x]) } else { W::zero() })
        .collect();
    BinaryMeasure::from_weights(n, w).map_err(|_| Error::ZeroMass)
}

/// Exchangeable measure with the same rank sequence.
pub fn symmetrize<W: Weight>(mu: &BinaryMeasure<W>) -> BinaryMeasure<W> {
    let a = mu.rank_weights();
    let binom = binomial_row(mu.n());
    let per: Vec<W> = a.iter().zip(&binom).map(|(ak, &b)| ak.div(&W::from_ratio(b as i64, 1))).collect();
    let probs = (0..1usize << mu.n()).map(|x| per[x.count_ones() as usize].clone()).collect();
    BinaryMeasure::from_parts_unchecked(mu.n(), probs)
}

fn transpose_index(x: usize, i: usize, j: usize) -> usize {
    if (x >> i & 1) != (x >> j & 1) {
        x ^ (1 << i | 1 << j)
    } else {
        x
    }
}

fn check_transposition(n: usize, (i, j): (usize, usize)) -> Result<()> {
    if i >= n || j >= n || i == j {
        return Err(Error::InvalidArgument(format!("({i} {j}) is not a transposition of 0..{n}")));
    }
    Ok(())
}

/// Applies `μ ↦ (1 − ε)μ + ε μ∘τ` for each `(τ, ε)` from left to right.
pub fn stir<W: Weight>(mu: &BinaryMeasure<W>, schedule: &[((usize, usize), W)]) -> Result<BinaryMeasure<W>> {
    let n = mu.n();
    let mut cur = mu.probs().to_vec();
    for ((i, j), eps) in schedule {
        check_transposition(n, (*i, *j))?;
        if eps.is_negative() || eps.cmp_weak(&W::one()) == Ordering::Greater {
            return Err(Error::InvalidArgument(format!("stirring weight {} outside [0,1]", eps.render())));
        }
        let keep = W::one().sub(eps);
        cur = (0..cur.len())
            .map(|x| cur[x].mul(&keep).add(&cur[transpose_index(x, *i, *j)].mul(eps)))
            .collect();
    }
    Ok(BinaryMeasure::from_parts_unchecked(n, cur))
}

/// Constant transposition rates held for `duration`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateSegment {
    pub duration: f64,
    pub rates: Vec<((usize, usize), f64)>,
}

/// Total-variation error budget for uniformization.
pub const UNIFORMIZATION_TOLERANCE: f64 = 1e-12;

/// Largest `Λ·dt` handled in one uniformization block.
const MAX_BLOCK_INTENSITY: f64 = 25.0;

/// Continuous-time stirring with piecewise-constant rates: each
/// transposition `τ` fires at its rate and replaces `μ` by `μ∘τ`.
///
/// Evaluated by uniformization; the truncated Poisson mass summed over all
/// blocks is at most [`UNIFORMIZATION_TOLERANCE`].
pub fn stir_continuous<W: Weight>(mu: &BinaryMeasure<W>, segments: &[RateSegment]) -> Result<FloatMeasure> {
    let n = mu.n();
    let mut blocks = Vec::new();
    for seg in segments {
        if !(seg.duration >= 0.0) || !seg.duration.is_finite() {
            return Err(Error::InvalidArgument(format!("invalid duration {}", seg.duration)));
        }
        let mut lambda = 0.0;
        for &(tau, r) in &seg.rates {
            check_transposition(n, tau)?;
            if !(r >= 0.0) || !r.is_finite() {
                return Err(Error::InvalidArgument(format!("invalid rate {r}")));
            }
            lambda += r;
        }
        if lambda == 0.0 || seg.duration == 0.0 {
            continue;
        }
        let total = lambda * seg.duration;
        let pieces = (total / MAX_BLOCK_INTENSITY).ceil().max(1.0) as usize;
        for _ in 0..pieces {
            blocks.push((seg, lambda, total / pieces as f64));
        }
    }
    let tol = UNIFORMIZATION_TOLERANCE / blocks.len().max(1) as f64;
    let mut cur: Vec<f64> = mu.probs().iter().map(|p| p.to_f64()).collect();
    for (seg, lambda, intensity) in blocks {
        let jump = |v: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; v.len()];
            for &((i, j), r) in &seg.rates {
                if r == 0.0 {
                    continue;
                }
                let w = r / lambda;
                for (x, o) in out.iter_mut().enumerate() {
                    *o += w * v[transpose_index(x, i, j)];
                }
            }
            out
        };
        let mut weight = (-intensity).exp();
        let mut covered = weight;
        let mut term = cur.clone();
        let mut acc: Vec<f64> = term.iter().map(|p| p * weight).collect();
        let mut k = 0usize;
        while 1.0 - covered > tol && k < 10_000 {
            k += 1;
            term = jump(&term);
            weight *= intensity / k as f64;
            covered += weight;
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += weight * t;
            }
        }
        // the truncated tail is mass-preserving noise below tol; restore unit mass
        let s: f64 = acc.iter().sum();
        cur = acc.into_iter().map(|p| p / s).collect();
    }
    Ok(BinaryMeasure::from_parts_unchecked(n, cur))
}

/// Conditional law on the rank band `a ≤ ΣX_j ≤ b`.
pub fn truncate<W: Weight>(mu: &BinaryMeasure<W>, a: usize, b: usize) -> Result<BinaryMeasure<W>> {
    if a > b {
        return Err(Error::InvalidArgument(format!("empty band [{a},{b}]")));
    }
    let w = mu
        .probs()
        .iter()
        .enumerate()
        .map(|(x, p)| {
            let r = x.count_ones() as usize;
            if (a..=b).contains(&r) {
                p.clone()
            } else {
                W::zero()
            }
        })
        .collect();
    BinaryMeasure::from_weights(mu.n(), w).map_err(|_| Error::ZeroMass)
}

/// Nonnegative log-concave weights `q_0..q_n` with interval support.
#[derive(Clone, Debug, PartialEq)]
pub struct LogConcaveWeights<W: Weight> {
    q: Vec<W>,
}

impl<W: Weight> LogConcaveWeights<W> {
    pub fn new(q: Vec<W>) -> Result<Self> {
        match is_log_concave(&q)? {
            None => Ok(LogConcaveWeights { q }),
            Some(k) => Err(Error::NotLogConcave(k)),
        }
    }

    /// Skips the log-concavity check (harness experiments only).
    pub fn forced(q: Vec<W>) -> Result<Self> {
        if q.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidArgument("negative rank weight".into()));
        }
        Ok(LogConcaveWeights { q })
    }

    pub fn values(&self) -> &[W] {
        &self.q
    }

    pub fn indicator(n: usize, a: usize, b: usize) -> Result<Self> {
        Self::new((0..=n).map(|k| if (a..=b).contains(&k) { W::one() } else { W::zero() }).collect())
    }

    pub fn geometric(n: usize, r: W) -> Result<Self> {
        Self::new((0..=n as u32).map(|k| r.pow(k)).collect())
    }
}

/// `μ′(x) ∝ q_{|x|} μ(x)`.
pub fn rank_rescale<W: Weight>(mu: &BinaryMeasure<W>, q: &LogConcaveWeights<W>) -> Result<BinaryMeasure<W>> {
    let n = mu.n();
    if q.values().len() != n + 1 {
        return Err(Error::LengthMismatch { expected: n + 1, got: q.values().len() });
    }
    let w = mu
        .probs()
        .iter()
        .enumerate()
        .map(|(x, p)| p.mul(&q.values()[x.count_ones() as usize]))
        .collect();
    BinaryMeasure::from_weights(n, w).map_err(|_| Error::ZeroMass)
}
