//! The disjoint-occurrence inequality `μ(A □ B) ≤ μ(A) μ(B)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mask_sum, total, PropertyReport, Witness};
use crate::error::{check_rank, Error, Result};
use crate::lattice::{full_mask, minimal_mask, upset_masks};
use crate::measure::BinaryMeasure;
use crate::weight::{Ring, Weight};

pub const MAX_ALL_EVENTS_RANK: usize = 3;
pub const MAX_UPSETS_ONLY_RANK: usize = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BkrMode {
    /// Every pair of events (rank ≤ 3).
    #[default]
    AllEvents,
    /// Pairs of up-sets (rank ≤ 5).
    UpsetsOnly,
}

impl std::str::FromStr for BkrMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-events" | "all_events" => Ok(BkrMode::AllEvents),
            "upsets-only" | "upsets_only" => Ok(BkrMode::UpsetsOnly),
            other => Err(Error::Unknown(other.to_string())),
        }
    }
}

/// `wit[ω]` has bit `S` set iff the cylinder of `ω` on `S` lies in `event`.
fn witness_sets(n: usize, event: u64) -> Vec<u64> {
    let size = 1usize << n;
    (0..size)
        .map(|omega| {
            let mut bits = 0u64;
            for s in 0..size {
                let free = !s & (size - 1);
                let base = omega & s;
                if crate::lattice::submasks(free).all(|c| event >> (base | c) & 1 == 1) {
                    bits |= 1 << s;
                }
            }
            bits
        })
        .collect()
}

/// Box product of arbitrary events through their witness tables.
/// Witness sets are closed under enlargement, so `T = Sᶜ` suffices.
fn box_all(n: usize, wa: &[u64], wb: &[u64]) -> u64 {
    let size = 1usize << n;
    let mut out = 0u64;
    for omega in 0..size {
        let hit = (0..size).any(|s| wa[omega] >> s & 1 == 1 && wb[omega] >> (!s & (size - 1)) & 1 == 1);
        if hit {
            out |= 1 << omega;
        }
    }
    out
}

/// Box product of up-sets: `⋃_{a ∈ min A} { b ∨ a : b ∈ B, b ∧ a = 0 }`.
fn box_upsets(min_a: &[usize], b: u64, disjoint: &[u64]) -> u64 {
    min_a.iter().fold(0u64, |acc, &a| acc | (b & disjoint[a]) << a)
}

/// Mass lookup for masks over at most 32 configurations, split in 16-bit halves.
struct MassTable<R> {
    lo: Vec<R>,
    hi: Vec<R>,
}

impl<R: Ring> MassTable<R> {
    fn new(p: &[R]) -> Self {
        let half = |offset: usize| {
            let k = p.len().saturating_sub(offset).min(16);
            let mut t = vec![R::zero(); 1 << k];
            for m in 1..1usize << k {
                let low = m.trailing_zeros() as usize;
                t[m] = t[m & (m - 1)].add(&p[offset + low]);
            }
            t
        };
        MassTable { lo: half(0), hi: half(16) }
    }

    fn get(&self, m: u64) -> R {
        let l = &self.lo[(m & 0xffff) as usize];
        let h = (m >> 16) as usize;
        if h == 0 {
            l.clone()
        } else {
            l.add(&self.hi[h])
        }
    }
}

fn violates<R: Ring>(z: &R, ab: &R, a: &R, b: &R) -> bool {
    z.mul(ab).exceeds(&a.mul(b))
}

pub(crate) fn bkr_violation<R: Ring>(p: &[R], n: usize, mode: BkrMode) -> Option<(u64, u64)> {
    let z = total(p);
    let size = 1usize << n;
    match mode {
        BkrMode::AllEvents => {
            let events: Vec<u64> = (1..full_mask(n)).collect();
            let wits: Vec<Vec<u64>> = events.iter().map(|&e| witness_sets(n, e)).collect();
            let mass: Vec<R> = events.iter().map(|&e| mask_sum(p, e)).collect();
            (0..events.len()).into_par_iter().find_map_first(|i| {
                (i..events.len()).find_map(|j| {
                    let ab = box_all(n, &wits[i], &wits[j]);
                    violates(&z, &mask_sum(p, ab), &mass[i], &mass[j]).then_some((events[i], events[j]))
                })
            })
        }
        BkrMode::UpsetsOnly => {
            let table = MassTable::new(p);
            let fm = full_mask(n);
            let ups: Vec<u64> = upset_masks(n).expect("rank checked by caller").iter().copied().filter(|&u| u != 0 && u != fm).collect();
            let mins: Vec<Vec<usize>> = ups
                .iter()
                .map(|&u| {
                    let m = minimal_mask(n, u);
                    (0..size).filter(|&x| m >> x & 1 == 1).collect()
                })
                .collect();
            let disjoint: Vec<u64> = (0..size)
                .map(|a| (0..size).filter(|&x| x & a == 0).fold(0u64, |m, x| m | 1 << x))
                .collect();
            let mass: Vec<R> = ups.iter().map(|&u| table.get(u)).collect();
            (0..ups.len()).into_par_iter().find_map_first(|i| {
                (i..ups.len()).find_map(|j| {
                    let ab = box_upsets(&mins[i], ups[j], &disjoint);
                    violates(&z, &table.get(ab), &mass[i], &mass[j]).then_some((ups[i], ups[j]))
                })
            })
        }
    }
}

pub fn check_bkrna<W: Weight>(mu: &BinaryMeasure<W>, mode: BkrMode) -> Result<PropertyReport> {
    let n = mu.n();
    let (limit, name) = match mode {
        BkrMode::AllEvents => (MAX_ALL_EVENTS_RANK, "bkrna"),
        BkrMode::UpsetsOnly => (MAX_UPSETS_ONLY_RANK, "bkrna-upsets"),
    };
    check_rank(n, limit, "box inequality")?;
    let list = |m: u64| (0..1usize << n).filter(|&x| m >> x & 1 == 1).collect::<Vec<_>>();
    let witness = bkr_violation(&mu.scaled(), n, mode).map(|(a, b)| Witness::BoxPair { a: list(a), b: list(b) });
    Ok(PropertyReport::from_witness(name, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{box_product, EventSet};
    use crate::measure::RationalMeasure;

    #[test]
    fn fast_box_matches_reference() {
        for n in 1..=3 {
            let size = 1usize << n;
            let disjoint: Vec<u64> =
                (0..size).map(|a| (0..size).filter(|&x| x & a == 0).fold(0u64, |m, x| m | 1 << x)).collect();
            let ups = upset_masks(n).unwrap();
            for a in 0..1u64 << size {
                for b in [0u64, 1, 5, 0x96, full_mask(n), a.rotate_left(3) & full_mask(n)] {
                    let b = b & full_mask(n);
                    let ea = EventSet::from_mask(n, a).unwrap();
                    let eb = EventSet::from_mask(n, b).unwrap();
                    let reference = box_product(&ea, &eb).unwrap().mask();
                    let got = box_all(n, &witness_sets(n, a), &witness_sets(n, b));
                    assert_eq!(got, reference);
                    if ups.contains(&a) && ups.contains(&b) {
                        let m = minimal_mask(n, a);
                        let mins: Vec<usize> = (0..size).filter(|&x| m >> x & 1 == 1).collect();
                        assert_eq!(box_upsets(&mins, b, &disjoint), reference);
                    }
                }
            }
        }
    }

    #[test]
    fn product_and_point_masses_satisfy_bkr() {
        let u = RationalMeasure::uniform(2).unwrap();
        assert!(check_bkrna(&u, BkrMode::AllEvents).unwrap().holds_p());
        let pm = RationalMeasure::point_mass(3, 5).unwrap();
        assert!(check_bkrna(&pm, BkrMode::AllEvents).unwrap().holds_p());
        let t = RationalMeasure::from_integers(3, &[0, 0, 0, 1, 0, 1, 1, 0]).unwrap();
        assert!(check_bkrna(&t, BkrMode::UpsetsOnly).unwrap().holds_p());
    }

    #[test]
    fn positively_correlated_pair_fails() {
        let m = RationalMeasure::from_integers(2, &[1, 0, 0, 1]).unwrap();
        let r = check_bkrna(&m, BkrMode::UpsetsOnly).unwrap();
        assert!(r.fails_p());
    }
}
