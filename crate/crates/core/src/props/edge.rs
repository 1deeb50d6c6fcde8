//! Some variable correlates nonnegatively with each up-set.

use super::{mask_sum, total, PropertyReport, Witness};
use crate::error::{check_rank, Result};
use crate::lattice::{full_mask, upset_masks, variable_mask, MAX_UPSET_RANK};
use crate::measure::BinaryMeasure;
use crate::weight::{Ring, Weight};

pub(crate) fn edge_violation<R: Ring>(p: &[R], n: usize) -> Option<u64> {
    let z = total(p);
    let vars: Vec<u64> = (0..n).map(|e| variable_mask(n, e)).collect();
    let var_mass: Vec<R> = vars.iter().map(|&v| mask_sum(p, v)).collect();
    let fm = full_mask(n);
    upset_masks(n).expect("rank checked by caller").iter().copied().filter(|&a| a != 0 && a != fm).find(|&a| {
        let am = mask_sum(p, a);
        vars.iter()
            .zip(&var_mass)
            .all(|(&v, vm)| vm.mul(&am).exceeds(&z.mul(&mask_sum(p, a & v))))
    })
}

/// For every up-set `A` some `e` has `μ(X_e 1_A) ≥ μ(X_e) μ(A)`.
pub fn check_upset_edge_correlation<W: Weight>(mu: &BinaryMeasure<W>) -> Result<PropertyReport> {
    let n = mu.n();
    check_rank(n, MAX_UPSET_RANK, "edge correlation")?;
    let witness = edge_violation(&mu.scaled(), n)
        .map(|a| Witness::EdgeUpSet { event: (0..1usize << n).filter(|&x| a >> x & 1 == 1).collect() });
    Ok(PropertyReport::from_witness("edge-correlation", witness))
}
