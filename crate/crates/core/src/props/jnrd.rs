//! Joint negative regression dependence.
//!
//! For every block `A` and up-set `H` over `A`, `η ↦ μ(H | X_{Aᶜ} = η)` must
//! be decreasing on the `Aᶜ`-cube. Comparisons run over every comparable
//! pair of positive-mass cells, not only cover pairs: with zero cells a
//! cover-only scan could miss a violation between two positive cells
//! separated by empty ones.

use rayon::prelude::*;

use super::{lift_event, subsets_canonical, vars_of, PropertyReport, Witness};
use crate::error::{check_rank, Result};
use crate::lattice::{full_mask, scatter, submasks, upset_masks};
use crate::measure::BinaryMeasure;
use crate::weight::{Ring, Weight};

pub const MAX_JNRD_RANK: usize = 6;

pub(crate) fn jnrd_witness<R: Ring>(p: &[R], n: usize) -> Option<Witness> {
    let full = (1usize << n) - 1;
    subsets_canonical(n)
        .into_par_iter()
        .filter(|&a| a != 0 && a != full)
        .find_map_first(|a| block_violation(p, n, a))
}

fn block_violation<R: Ring>(p: &[R], n: usize, a: usize) -> Option<Witness> {
    let full = (1usize << n) - 1;
    let av = vars_of(a);
    let cv = vars_of(full & !a);
    let (na, nc) = (av.len(), cv.len());
    // table[η][x_A]
    let table: Vec<Vec<R>> = (0..1usize << nc)
        .map(|eta| (0..1usize << na).map(|x| p[scatter(x, &av) | scatter(eta, &cv)].clone()).collect())
        .collect();
    let mass: Vec<R> = table.iter().map(|row| super::total(row)).collect();
    let live: Vec<usize> = (0..1usize << nc).filter(|&e| !mass[e].is_exact_zero()).collect();
    if live.len() < 2 {
        return None;
    }
    let fa = full_mask(na);
    for &h in upset_masks(na).expect("block rank <= 5").iter() {
        if h == 0 || h == fa {
            continue;
        }
        let hm: Vec<R> = table.iter().map(|row| super::mask_sum(row, h)).collect();
        for &lo in &live {
            let complement = ((1usize << nc) - 1) & !lo;
            for up in submasks(complement).skip(1).map(|s| s | lo) {
                if mass[up].is_exact_zero() {
                    continue;
                }
                // μ(H|up) > μ(H|lo)
                if hm[up].mul(&mass[lo]).exceeds(&hm[lo].mul(&mass[up])) {
                    return Some(Witness::Regression {
                        block: av.clone(),
                        h: lift_event(n, &av, h),
                        lower: scatter(lo, &cv),
                        upper: scatter(up, &cv),
                    });
                }
            }
        }
    }
    None
}

pub fn check_jnrd<W: Weight>(mu: &BinaryMeasure<W>) -> Result<PropertyReport> {
    check_rank(mu.n(), MAX_JNRD_RANK, "joint negative regression dependence")?;
    Ok(PropertyReport::from_witness("jnrd", jnrd_witness(&mu.scaled(), mu.n())))
}
