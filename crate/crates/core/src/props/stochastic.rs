//! Stochastic domination and covering between measures on the same lattice.

use serde::{Deserialize, Serialize};

use super::flow::FlowNetwork;
use super::{mask_sum, total, PropertyReport, Witness};
use crate::error::{check_rank, Error, Result};
use crate::lattice::{full_mask, upset_masks, MAX_ENUM_RANK};
use crate::measure::BinaryMeasure;
use crate::weight::{Ring, Weight};

/// Largest rank for which [`DominanceMode::Auto`] enumerates up-sets.
pub const AUTO_ENUMERATION_RANK: usize = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DominanceMode {
    /// Enumeration up to rank 5, flow above.
    #[default]
    Auto,
    /// Every up-set (rank ≤ 6).
    Enumerate,
    /// Monotone-coupling feasibility as a maximum flow (rank ≤ 12).
    Flow,
}

impl std::str::FromStr for DominanceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(DominanceMode::Auto),
            "enumerate" => Ok(DominanceMode::Enumerate),
            "flow" => Ok(DominanceMode::Flow),
            other => Err(Error::Unknown(other.to_string())),
        }
    }
}

fn events(n: usize, mask: impl Fn(usize) -> bool) -> Vec<usize> {
    (0..1usize << n).filter(|&x| mask(x)).collect()
}

pub(crate) fn dominance_by_enumeration<R: Ring>(pm: &[R], pn: &[R], n: usize) -> Option<u64> {
    let (zm, zn) = (total(pm), total(pn));
    let fm = full_mask(n);
    upset_masks(n)
        .expect("rank checked by caller")
        .iter()
        .copied()
        .filter(|&a| a != 0 && a != fm)
        .find(|&a| mask_sum(pn, a).mul(&zm).exceeds(&mask_sum(pm, a).mul(&zn)))
}

/// Returns the violating up-set (as a membership vector) if no monotone
/// coupling `X ≥ Y` exists.
pub(crate) fn dominance_by_flow<R: Ring>(pm: &[R], pn: &[R], n: usize) -> Option<Vec<bool>> {
    let size = 1usize << n;
    let (zm, zn) = (total(pm), total(pn));
    let (s, t) = (size, size + 1);
    let mut net = FlowNetwork::new(size + 2);
    let need = zm.mul(&zn);
    for x in 0..size {
        if !pm[x].is_exact_zero() {
            net.add_edge(s, x, pm[x].mul(&zn));
        }
        if !pn[x].is_exact_zero() {
            net.add_edge(x, t, pn[x].mul(&zm));
        }
    }
    let inf = need.add(&need).add(&R::one());
    for x in 0..size {
        for j in 0..n {
            if x >> j & 1 == 1 {
                net.add_edge(x, x ^ 1 << j, inf.clone());
            }
        }
    }
    let flow = net.max_flow(s, t, &inf);
    if !need.exceeds(&flow) {
        return None;
    }
    // residual-reachable nodes form a down-set R with ν(R) < μ(R)
    let side = net.source_side(s);
    Some((0..size).map(|x| !side[x]).collect())
}

fn same_rank<W: Weight>(mu: &BinaryMeasure<W>, nu: &BinaryMeasure<W>) -> Result<usize> {
    if mu.n() != nu.n() {
        return Err(Error::RankMismatch(mu.n(), nu.n()));
    }
    Ok(mu.n())
}

/// `μ(A) ≥ ν(A)` for every up-set `A`.
pub fn stochastic_dominates<W: Weight>(
    mu: &BinaryMeasure<W>,
    nu: &BinaryMeasure<W>,
    mode: DominanceMode,
) -> Result<PropertyReport> {
    let n = same_rank(mu, nu)?;
    let (pm, pn) = (mu.scaled(), nu.scaled());
    let enumerate = match mode {
        DominanceMode::Auto => n <= AUTO_ENUMERATION_RANK,
        DominanceMode::Enumerate => true,
        DominanceMode::Flow => false,
    };
    let witness = if enumerate {
        check_rank(n, crate::lattice::MAX_UPSET_RANK, "up-set enumeration")?;
        dominance_by_enumeration(&pm, &pn, n).map(|a| events(n, |x| a >> x & 1 == 1))
    } else {
        check_rank(n, MAX_ENUM_RANK, "dominance flow")?;
        dominance_by_flow(&pm, &pn, n).map(|up| events(n, |x| up[x]))
    };
    Ok(PropertyReport::from_witness("dominates", witness.map(|event| Witness::UpSet { event })))
}

/// Whether a coupling `X ~ μ`, `Y ~ ν` exists with `X = Y` or `X` covering `Y`.
pub fn stochastic_covers<W: Weight>(mu: &BinaryMeasure<W>, nu: &BinaryMeasure<W>) -> Result<PropertyReport> {
    let n = same_rank(mu, nu)?;
    check_rank(n, MAX_ENUM_RANK, "covering")?;
    let (pm, pn) = (mu.scaled(), nu.scaled());
    let witness = covers_violation(&pm, &pn, n).map(|set| Witness::HallSet { set });
    Ok(PropertyReport::from_witness("covers", witness))
}

pub(crate) fn covers_violation<R: Ring>(pm: &[R], pn: &[R], n: usize) -> Option<Vec<usize>> {
    let size = 1usize << n;
    let (zm, zn) = (total(pm), total(pn));
    let need = zm.mul(&zn);
    let (s, t) = (2 * size, 2 * size + 1);
    let mut net = FlowNetwork::new(2 * size + 2);
    let inf = need.add(&need).add(&R::one());
    for x in 0..size {
        if !pm[x].is_exact_zero() {
            net.add_edge(s, x, pm[x].mul(&zn));
            net.add_edge(x, size + x, inf.clone());
            for j in 0..n {
                if x >> j & 1 == 1 {
                    net.add_edge(x, size + (x ^ 1 << j), inf.clone());
                }
            }
        }
        if !pn[x].is_exact_zero() {
            net.add_edge(size + x, t, pn[x].mul(&zm));
        }
    }
    let flow = net.max_flow(s, t, &inf);
    if !need.exceeds(&flow) {
        return None;
    }
    let side = net.source_side(s);
    Some((0..size).filter(|&x| side[x] && !pm[x].is_exact_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::RationalMeasure;

    fn five_point_halves() -> (RationalMeasure, RationalMeasure) {
        // μ|X3=0 is uniform on {000,010,100,110}; μ|X3=1 is the point 000
        let hi = RationalMeasure::from_integers(2, &[1, 1, 1, 1]).unwrap();
        let lo = RationalMeasure::from_integers(2, &[1, 0, 0, 0]).unwrap();
        (hi, lo)
    }

    #[test]
    fn dominance_without_cover() {
        let (hi, lo) = five_point_halves();
        for mode in [DominanceMode::Enumerate, DominanceMode::Flow] {
            assert!(stochastic_dominates(&hi, &lo, mode).unwrap().holds_p());
            assert!(stochastic_dominates(&lo, &hi, mode).unwrap().fails_p());
        }
        assert!(stochastic_covers(&hi, &lo).unwrap().fails_p());
    }

    #[test]
    fn identical_measures_cover() {
        let m = RationalMeasure::from_integers(3, &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert!(stochastic_covers(&m, &m).unwrap().holds_p());
        let top = RationalMeasure::point_mass(3, 7).unwrap();
        assert!(stochastic_dominates(&top, &m, DominanceMode::Flow).unwrap().holds_p());
    }

    #[test]
    fn flow_witness_is_an_upset_with_deficit() {
        let (hi, lo) = five_point_halves();
        let r = stochastic_dominates(&lo, &hi, DominanceMode::Flow).unwrap();
        let Some(Witness::UpSet { event }) = r.witness else { panic!() };
        let e = crate::lattice::EventSet::from_indices(2, event).unwrap();
        assert!(e.is_upset());
        assert!(lo.mass(&e).unwrap() < hi.mass(&e).unwrap());
    }
}
