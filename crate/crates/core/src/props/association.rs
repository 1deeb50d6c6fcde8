//! Positive and negative association over pairs of up-set indicators.
//!
//! Covariance is bilinear and every increasing function on a finite
//! lattice is a constant plus a nonnegative combination of up-set
//! indicators, so indicator pairs are the extremal test functions.

use super::flow::FlowNetwork;
use super::{lift_event, mask_sum, total, vars_of, PropertyReport, Sign, Witness};
use crate::error::{check_rank, Result};
use crate::lattice::{full_mask, scatter, upset_masks};
use crate::measure::BinaryMeasure;
use crate::weight::{Ring, Weight};

pub const MAX_ASSOCIATION_RANK: usize = 6;
/// Association over all up-set pairs (not only disjoint supports).
pub const MAX_FULL_PA_RANK: usize = 5;

/// A violating pair in compact coordinates: `f` is an up-set over the
/// variables in `f_vars`, `g` one over `g_vars`.
pub(crate) struct PairHit {
    pub f_vars: Vec<usize>,
    pub f: u64,
    pub g_vars: Vec<usize>,
    pub g: u64,
}

impl PairHit {
    pub fn witness(&self, n: usize, vars: &[usize], conditioning: Vec<(usize, bool)>) -> Witness {
        let map = |v: &[usize]| v.iter().map(|&k| vars[k]).collect::<Vec<_>>();
        let fv = map(&self.f_vars);
        let gv = map(&self.g_vars);
        Witness::Association {
            conditioning,
            block: fv.clone(),
            f: lift_event(n, &fv, self.f),
            g: lift_event(n, &gv, self.g),
        }
    }
}

fn violates<R: Ring>(z: &R, fg: &R, f: &R, g: &R, sign: Sign) -> bool {
    let joint = z.mul(fg);
    let prod = f.mul(g);
    match sign {
        Sign::Negative => joint.exceeds(&prod),
        Sign::Positive => prod.exceeds(&joint),
    }
}

/// Association restricted to increasing events on complementary blocks.
pub(crate) fn disjoint_violation<R: Ring>(p: &[R], n: usize, sign: Sign) -> Option<PairHit> {
    if n < 2 {
        return None;
    }
    let z = total(p);
    let full = (1usize << n) - 1;
    for a in (1..full).filter(|a| a & 1 == 1) {
        let b = full & !a;
        let (small, large) = if a.count_ones() <= b.count_ones() { (a, b) } else { (b, a) };
        let sv = vars_of(small);
        let lv = vars_of(large);
        let (ns, nl) = (sv.len(), lv.len());
        // joint[s][l]
        let joint: Vec<Vec<R>> = (0..1usize << ns)
            .map(|s| (0..1usize << nl).map(|l| p[scatter(s, &sv) | scatter(l, &lv)].clone()).collect())
            .collect();
        let mut col = vec![R::zero(); 1 << nl];
        for row in &joint {
            for (c, v) in col.iter_mut().zip(row) {
                c.add_assign(v);
            }
        }
        let ups_s = upset_masks(ns).expect("block rank <= 5");
        let ups_l = upset_masks(nl).expect("block rank <= 5");
        let (fs, fl) = (full_mask(ns), full_mask(nl));
        let g_mass: Vec<R> = ups_l.iter().map(|&g| mask_sum(&col, g)).collect();
        for &f in ups_s.iter().filter(|&&f| f != 0 && f != fs) {
            let mut row = vec![R::zero(); 1 << nl];
            let mut m = f;
            while m != 0 {
                let s = m.trailing_zeros() as usize;
                for (r, v) in row.iter_mut().zip(&joint[s]) {
                    r.add_assign(v);
                }
                m &= m - 1;
            }
            let f_mass = total(&row);
            for (gi, &g) in ups_l.iter().enumerate() {
                if g == 0 || g == fl {
                    continue;
                }
                let fg = mask_sum(&row, g);
                if violates(&z, &fg, &f_mass, &g_mass[gi], sign) {
                    return Some(PairHit { f_vars: sv.clone(), f, g_vars: lv.clone(), g });
                }
            }
        }
    }
    None
}

/// Positive association over all pairs of up-sets of the whole lattice.
pub(crate) fn full_pa_violation<R: Ring>(p: &[R], n: usize) -> Option<PairHit> {
    let ups = upset_masks(n).expect("rank checked by caller");
    let all: Vec<usize> = (0..n).collect();
    let fm = full_mask(n);
    let z = total(p);
    if n <= 4 {
        let mass: Vec<R> = ups.iter().map(|&u| mask_sum(p, u)).collect();
        for (i, &f) in ups.iter().enumerate() {
            if f == 0 || f == fm {
                continue;
            }
            for (j, &g) in ups.iter().enumerate().skip(i) {
                if g == 0 || g == fm {
                    continue;
                }
                let fg = mask_sum(p, f & g);
                if violates(&z, &fg, &mass[i], &mass[j], Sign::Positive) {
                    return Some(PairHit { f_vars: all.clone(), f, g_vars: all, g });
                }
            }
        }
        return None;
    }
    // For fixed F, maximize Σ_{x∈G} (μ(F) − Z·1_F(x)) p(x) over up-sets G:
    // a maximum-weight closure, solved as a minimum cut.
    let size = 1usize << n;
    for &f in ups.iter() {
        if f == 0 || f == fm {
            continue;
        }
        let f_mass = mask_sum(p, f);
        let w: Vec<R> = (0..size)
            .map(|x| {
                let a = f_mass.mul(&p[x]);
                if f >> x & 1 == 1 {
                    a.sub(&z.mul(&p[x]))
                } else {
                    a
                }
            })
            .collect();
        let (s, t) = (size, size + 1);
        let mut net = FlowNetwork::new(size + 2);
        let mut pos = R::zero();
        let mut neg = R::zero();
        for (x, wx) in w.iter().enumerate() {
            if wx.exceeds(&R::zero()) {
                net.add_edge(s, x, wx.clone());
                pos.add_assign(wx);
            } else if R::zero().exceeds(wx) {
                let c = R::zero().sub(wx);
                net.add_edge(x, t, c.clone());
                neg.add_assign(&c);
            }
        }
        if !pos.exceeds(&R::zero()) {
            continue;
        }
        let inf = pos.add(&neg).add(&R::one());
        for x in 0..size {
            for j in 0..n {
                if x >> j & 1 == 0 {
                    net.add_edge(x, x | 1 << j, inf.clone());
                }
            }
        }
        let flow = net.max_flow(s, t, &inf);
        if pos.sub(&flow).exceeds(&R::zero()) {
            let side = net.source_side(s);
            let g = (0..size).filter(|&x| side[x]).fold(0u64, |m, x| m | 1 << x);
            let fg = mask_sum(p, f & g);
            if violates(&z, &fg, &f_mass, &mask_sum(p, g), Sign::Positive) {
                return Some(PairHit { f_vars: all.clone(), f, g_vars: all, g });
            }
        }
    }
    None
}

pub fn property_name(sign: Sign, disjoint_only: bool) -> &'static str {
    match (sign, disjoint_only) {
        (Sign::Negative, _) => "na",
        (Sign::Positive, false) => "pa",
        (Sign::Positive, true) => "pa-disjoint",
    }
}

/// Negative association (always over disjoint supports), or positive
/// association over all up-set pairs / disjoint-support pairs only.
pub fn check_association<W: Weight>(mu: &BinaryMeasure<W>, sign: Sign, disjoint_only: bool) -> Result<PropertyReport> {
    let n = mu.n();
    let name = property_name(sign, disjoint_only);
    let full_pa = sign == Sign::Positive && !disjoint_only;
    if full_pa {
        check_rank(n, MAX_FULL_PA_RANK, "full positive association")?;
    } else {
        check_rank(n, MAX_ASSOCIATION_RANK, "association")?;
    }
    let p = mu.scaled();
    let hit = if full_pa { full_pa_violation(&p, n) } else { disjoint_violation(&p, n, sign) };
    let all: Vec<usize> = (0..n).collect();
    Ok(PropertyReport::from_witness(name, hit.map(|h| h.witness(n, &all, Vec::new()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::RationalMeasure;
    use crate::weight::ratio;

    #[test]
    fn two_variables_reduce_to_covariance() {
        let neg = RationalMeasure::from_integers(2, &[1, 2, 2, 1]).unwrap();
        let pos = RationalMeasure::from_integers(2, &[2, 1, 1, 2]).unwrap();
        assert!(check_association(&neg, Sign::Negative, true).unwrap().holds_p());
        assert!(check_association(&pos, Sign::Negative, true).unwrap().fails_p());
        assert!(check_association(&pos, Sign::Positive, false).unwrap().holds_p());
        assert!(check_association(&neg, Sign::Positive, true).unwrap().fails_p());
    }

    #[test]
    fn products_are_associated_both_ways() {
        let m = RationalMeasure::product_bernoulli(&[ratio(1, 3), ratio(1, 2), ratio(3, 4), ratio(1, 5), ratio(2, 3)])
            .unwrap();
        assert!(check_association(&m, Sign::Negative, true).unwrap().holds_p());
        assert!(check_association(&m, Sign::Positive, false).unwrap().holds_p());
    }

    #[test]
    fn full_pa_flow_agrees_with_enumeration() {
        // negatively correlated pair embedded in 5 variables
        let mut w = vec![1i64; 32];
        w[0b00011] = 0;
        let m = RationalMeasure::from_integers(5, &w).unwrap();
        let p = m.scaled();
        assert!(full_pa_violation(&p, 5).is_some());
        let prod = RationalMeasure::product_bernoulli(&vec![ratio(1, 2); 5]).unwrap();
        assert!(full_pa_violation(&prod.scaled(), 5).is_none());
    }
}
