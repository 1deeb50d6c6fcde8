//! Occupancy indicators of `k` balls dropped independently into urns.

use crate::error::{check_rank, Error, Result};
use crate::measure::{BinaryMeasure, MAX_MEASURE_RANK};
use crate::weight::Weight;

/// Law of `X_i = 1{urn i nonempty}` after `k` IID drops with law `p`.
///
/// `P(urns in T all empty) = (1 − p(T))^k`, then Möbius inversion over
/// supersets gives the exact-emptiness probabilities.
pub fn urn_measure<W: Weight>(n: usize, k: u32, p: &[W]) -> Result<BinaryMeasure<W>> {
    check_rank(n, MAX_MEASURE_RANK, "measures")?;
    if p.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: p.len() });
    }
    if p.iter().any(|x| x.is_negative()) {
        return Err(Error::InvalidArgument("negative urn probability".into()));
    }
    let total = p.iter().fold(W::zero(), |s, x| s.add(x));
    if !total.cmp_weak(&W::one()).is_eq() {
        return Err(Error::InvalidArgument(format!("urn probabilities sum to {}", total.render())));
    }
    let full = (1usize << n) - 1;
    // g[T] = P(every urn in T empty), indexed by T
    let mut g: Vec<W> = (0..=full)
        .map(|t| {
            let inside = (0..n).filter(|i| t >> i & 1 == 1).fold(W::zero(), |s, i| s.add(&p[i]));
            W::one().sub(&inside).pow(k)
        })
        .collect();
    // superset Möbius inversion: h[T] = P(empty set is exactly T)
    for i in 0..n {
        for t in 0..=full {
            if t >> i & 1 == 0 {
                let up = g[t | 1 << i].clone();
                g[t] = g[t].sub(&up);
            }
        }
    }
    let probs = (0..=full).map(|x| clamp(g[full ^ x].clone())).collect();
    BinaryMeasure::from_weights(n, probs)
}

// float round-off can leave tiny negatives on zero-probability atoms
fn clamp<W: Weight>(x: W) -> W {
    if x.is_negative() && x.cmp_weak(&W::zero()).is_eq() {
        W::zero()
    } else {
        x
    }
}
