//! Brute-force oracles, written directly from the definitions and sharing
//! no code with the library checkers. Inputs are atom weights in index
//! order (bit `j` = variable `j`); weights need not be normalized.
#![allow(dead_code)]

use std::sync::OnceLock;

use negdep::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Common-denominator integer weights.
pub fn scaled(w: &[Rational]) -> Vec<BigInt> {
    let l = w.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    w.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

fn build_upsets(k: usize) -> Vec<u64> {
    if k == 0 {
        return vec![0, 1];
    }
    // an up-set splits into its X_k = 0 half U0 and X_k = 1 half U1 with U0 ⊆ U1
    let lower = upsets(k - 1);
    let half = 1u32 << (k - 1);
    let mut out = Vec::new();
    for &u0 in lower {
        for &u1 in lower {
            if u0 & !u1 == 0 {
                out.push(u0 | u1 << half);
            }
        }
    }
    out
}

/// All up-sets of `B_k` (k ≤ 5) as bitmasks over the `2^k` points.
pub fn upsets(k: usize) -> &'static [u64] {
    static CACHE: [OnceLock<Vec<u64>>; 6] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CACHE[k].get_or_init(|| build_upsets(k))
}

/// Marginal weights of the variables `vars`, listed as bits `0..vars.len()`.
pub fn marginal(w: &[BigInt], vars: &[usize]) -> Vec<BigInt> {
    let mut m = vec![BigInt::zero(); 1 << vars.len()];
    for (x, p) in w.iter().enumerate() {
        let y = vars.iter().enumerate().fold(0, |acc, (i, &v)| acc | (x >> v & 1) << i);
        m[y] += p;
    }
    m
}

fn vars_of(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|j| mask >> j & 1 == 1).collect()
}

fn mass(m: &[BigInt], set: u64) -> BigInt {
    m.iter().enumerate().filter(|(x, _)| set >> x & 1 == 1).map(|(_, p)| p).sum()
}

/// Negative association over disjoint variable blocks.
pub fn na(w: &[BigInt], n: usize) -> bool {
    let z: BigInt = w.iter().sum();
    for a in 1..1usize << n {
        for b in a + 1..1usize << n {
            if a & b != 0 {
                continue;
            }
            let (va, vb) = (vars_of(a, n), vars_of(b, n));
            let ka = va.len();
            let joint = marginal(w, &[va.clone(), vb.clone()].concat());
            let low = (1usize << ka) - 1;
            for &u in upsets(ka) {
                for &v in upsets(vb.len()) {
                    let (mut pu, mut pv, mut puv) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
                    for (x, p) in joint.iter().enumerate() {
                        let inu = u >> (x & low) & 1 == 1;
                        let inv = v >> (x >> ka) & 1 == 1;
                        if inu {
                            pu += p;
                        }
                        if inv {
                            pv += p;
                        }
                        if inu && inv {
                            puv += p;
                        }
                    }
                    if puv * &z > pu * pv {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Positive association (all up-set pairs on the full lattice).
pub fn pa(w: &[BigInt], n: usize) -> bool {
    let z: BigInt = w.iter().sum();
    let ups = upsets(n);
    let masses: Vec<BigInt> = ups.iter().map(|&u| mass(w, u)).collect();
    for (i, &u) in ups.iter().enumerate() {
        for (j, &v) in ups.iter().enumerate().skip(i) {
            if mass(w, u & v) * &z < &masses[i] * &masses[j] {
                return false;
            }
        }
    }
    true
}

/// Weights conditioned on `X_F = v`, as a measure on the free variables.
fn conditioned(w: &[BigInt], n: usize, fixed: usize, v: usize) -> Vec<BigInt> {
    let restricted: Vec<BigInt> =
        w.iter().enumerate().map(|(x, p)| if x & fixed == v { p.clone() } else { BigInt::zero() }).collect();
    marginal(&restricted, &vars_of(!fixed & ((1 << n) - 1), n))
}

/// Negative association of every conditional law on coordinate values.
pub fn cna(w: &[BigInt], n: usize) -> bool {
    let full = (1usize << n) - 1;
    for fixed in 0..full {
        let mut v = fixed;
        loop {
            let c = conditioned(w, n, fixed, v);
            let free = n - fixed.count_ones() as usize;
            if c.iter().any(|p| !p.is_zero()) && !na(&c, free) {
                return false;
            }
            if v == 0 {
                break;
            }
            v = (v - 1) & fixed;
        }
    }
    true
}

/// Negative lattice condition on every projection.
pub fn hnlc(w: &[BigInt], n: usize) -> bool {
    (1..1usize << n).all(|s| {
        let m = marginal(w, &vars_of(s, n));
        (0..m.len()).all(|x| (0..m.len()).all(|y| &m[x | y] * &m[x & y] <= &m[x] * &m[y]))
    })
}

/// Conditional laws of `X_T` decrease stochastically in `X_S` for every
/// split `S ∪ T`.
pub fn jnrd(w: &[BigInt], n: usize) -> bool {
    let full = (1usize << n) - 1;
    for s in 1..full {
        let (vs, vt) = (vars_of(s, n), vars_of(full & !s, n));
        let ks = vs.len();
        let joint = marginal(w, &[vs, vt.clone()].concat());
        let slice = |a: usize| -> Vec<BigInt> { (0..1usize << vt.len()).map(|t| joint[a | t << ks].clone()).collect() };
        for a in 0..1usize << ks {
            let la = slice(a);
            let pa: BigInt = la.iter().sum();
            if pa.is_zero() {
                continue;
            }
            for b in 0..1usize << ks {
                if a & b != a || a == b {
                    continue;
                }
                let lb = slice(b);
                let pb: BigInt = lb.iter().sum();
                if pb.is_zero() {
                    continue;
                }
                if upsets(vt.len()).iter().any(|&u| mass(&lb, u) * &pa > mass(&la, u) * &pb) {
                    return false;
                }
            }
        }
    }
    true
}

fn binom(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `a_k / C(n,k)` is log-concave with no internal zeros.
pub fn ulc(a: &[Rational]) -> bool {
    let n = a.len() - 1;
    let q: Vec<Rational> = a.iter().enumerate().map(|(k, x)| x / Rational::from_integer(binom(n, k))).collect();
    let nz: Vec<usize> = (0..=n).filter(|&k| !q[k].is_zero()).collect();
    if let (Some(&lo), Some(&hi)) = (nz.first(), nz.last()) {
        if hi - lo + 1 != nz.len() {
            return false;
        }
    }
    (1..n).all(|k| &q[k] * &q[k] >= &q[k - 1] * &q[k + 1])
}

pub fn rank_weights(w: &[Rational], n: usize) -> Vec<Rational> {
    let mut a = vec![Rational::zero(); n + 1];
    for (x, p) in w.iter().enumerate() {
        a[x.count_ones() as usize] += p;
    }
    a
}

/// `mu(U) ≥ nu(U)` for every up-set `U` (both normalized, n ≤ 5).
pub fn dominates(mu: &[Rational], nu: &[Rational], n: usize) -> bool {
    let both = scaled(&[mu, nu].concat());
    let (m, v) = both.split_at(mu.len());
    upsets(n).iter().all(|&u| mass(m, u) >= mass(v, u))
}

/// The law given rank `k + 1` dominates the law given rank `k`.
pub fn rank_monotone(w: &[BigInt], n: usize) -> bool {
    let r: Vec<BigInt> =
        (0..=n).map(|k| w.iter().enumerate().filter(|(x, _)| x.count_ones() as usize == k).map(|(_, p)| p).sum()).collect();
    for &u in upsets(n) {
        let mut pu = vec![BigInt::zero(); n + 1];
        for (x, p) in w.iter().enumerate() {
            if u >> x & 1 == 1 {
                pu[x.count_ones() as usize] += p;
            }
        }
        for k in 0..n {
            if r[k].is_zero() || r[k + 1].is_zero() {
                continue;
            }
            if &pu[k + 1] * &r[k] < &pu[k] * &r[k + 1] {
                return false;
            }
        }
    }
    true
}

pub fn covariance(w: &[Rational], e: usize, f: usize) -> Rational {
    let z: Rational = w.iter().sum();
    let p = |pred: &dyn Fn(usize) -> bool| -> Rational {
        w.iter().enumerate().filter(|(x, _)| pred(*x)).map(|(_, p)| p).sum::<Rational>() / &z
    };
    p(&|x| x >> e & 1 == 1 && x >> f & 1 == 1) - p(&|x| x >> e & 1 == 1) * p(&|x| x >> f & 1 == 1)
}

pub fn is_nonpositive(r: &Rational) -> bool {
    !r.is_positive()
}
