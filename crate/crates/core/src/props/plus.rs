//! Field-and-projection closures of the base properties ("+" checks).
//!
//! The field space is infinite, so a clean run is reported as
//! inconclusive together with the number of measures examined.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cna::cna_witness;
use super::jnrd::jnrd_witness;
use super::lattice_cond::lattice_witness;
use super::nc::nc_violation;
use super::rank::ulc_violation;
use super::{assignments_canonical, marginal, restrict, subsets_canonical, vars_of, PropertyReport, Sign, Witness};
use crate::error::{check_rank, Error, Result};
use crate::measure::BinaryMeasure;
use crate::ops::{apply_field, project, ExternalField, FieldValue};
use crate::weight::{Rational, Ring, Weight};

pub const MAX_PLUS_RANK: usize = 6;

/// Values used on one or two coordinates by the deterministic grid.
pub const GRID_VALUES: [(i64, i64); 4] = [(1, 1000), (1, 10), (10, 1), (1000, 1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlusBase {
    Nc,
    Hnlc,
    Jnrd,
    Cna,
    Ulc,
}

impl PlusBase {
    pub fn name(self) -> &'static str {
        match self {
            PlusBase::Nc => "nc",
            PlusBase::Hnlc => "hnlc",
            PlusBase::Jnrd => "jnrd",
            PlusBase::Cna => "cna",
            PlusBase::Ulc => "ulc",
        }
    }

    /// Bases that are checked under every conditioning limit as well as
    /// under each finite field. CNA and JNRD are closed under conditioning.
    fn crosses_limits(self) -> bool {
        matches!(self, PlusBase::Nc | PlusBase::Hnlc | PlusBase::Ulc)
    }

    /// Bases whose check does not already cover projections.
    fn needs_projections(self) -> bool {
        matches!(self, PlusBase::Jnrd | PlusBase::Ulc)
    }
}

impl std::str::FromStr for PlusBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim_end_matches('+');
        [PlusBase::Nc, PlusBase::Hnlc, PlusBase::Jnrd, PlusBase::Cna, PlusBase::Ulc]
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Unknown(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlusOptions {
    /// Random fields after the deterministic grid.
    pub samples: usize,
    pub seed: u64,
}

impl Default for PlusOptions {
    fn default() -> Self {
        PlusOptions { samples: 100, seed: 0 }
    }
}

/// `10^u` for `u` uniform on `[-3, 3]`, rounded to three significant digits.
fn random_weight(rng: &mut ChaCha8Rng) -> Rational {
    let u: f64 = rng.gen_range(-3.0..=3.0);
    let w = 10f64.powf(u);
    let e = w.log10().floor() as i32 - 2;
    let m = (w / 10f64.powi(e)).round() as i64;
    let ten = BigInt::from(10);
    if e >= 0 {
        Rational::from_integer(BigInt::from(m) * num_traits::pow(ten, e as usize))
    } else {
        Rational::new(BigInt::from(m), num_traits::pow(ten, (-e) as usize))
    }
}

/// The finite fields examined, in order: all ones, the grid on single
/// coordinates, the grid on coordinate pairs, then seeded random fields.
pub fn plus_fields(n: usize, opts: &PlusOptions) -> Vec<Vec<Rational>> {
    let one = || vec![Rational::from_integer(1.into()); n];
    let grid: Vec<Rational> = GRID_VALUES.iter().map(|&(p, q)| crate::weight::ratio(p, q)).collect();
    let mut out = vec![one()];
    for j in 0..n {
        for g in &grid {
            let mut f = one();
            f[j] = g.clone();
            out.push(f);
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            for gj in &grid {
                for gk in &grid {
                    let mut f = one();
                    f[j] = gj.clone();
                    f[k] = gk.clone();
                    out.push(f);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.samples {
        out.push((0..n).map(|_| random_weight(&mut rng)).collect());
    }
    out
}

struct Hit {
    fixed: usize,
    ones: usize,
    projection: Vec<usize>,
}

/// Runs the base on the conditional law given `(fixed, ones)` and its
/// projections; `p` holds the scaled atoms after the finite field.
fn evaluate<R: Ring>(base: PlusBase, p: &[R], n: usize, fixed: usize, ones: usize) -> Option<Vec<usize>> {
    let (free, q) = restrict(p, n, fixed, ones);
    let m = free.len();
    if m < 2 || q.iter().all(|v| v.is_exact_zero()) {
        return None;
    }
    let whole = || Some(free.clone());
    if !base.needs_projections() {
        let bad = match base {
            PlusBase::Nc => nc_violation(&q, m).is_some(),
            PlusBase::Hnlc => lattice_witness(&q, m, Sign::Negative, true).is_some(),
            PlusBase::Cna => cna_witness(&q, m).is_some(),
            _ => unreachable!(),
        };
        return if bad { whole() } else { None };
    }
    subsets_canonical(m).into_iter().filter(|s| s.count_ones() >= 2).find_map(|s| {
        let vars = vars_of(s);
        let r = marginal(&q, &vars);
        let bad = match base {
            PlusBase::Jnrd => jnrd_witness(&r, vars.len()).is_some(),
            PlusBase::Ulc => {
                let mut a = vec![R::zero(); vars.len() + 1];
                for (x, v) in r.iter().enumerate() {
                    a[x.count_ones() as usize].add_assign(v);
                }
                ulc_violation(&a).is_some()
            }
            _ => unreachable!(),
        };
        bad.then(|| vars.iter().map(|&k| free[k]).collect())
    })
}

fn check_base<W: Weight>(mu: &BinaryMeasure<W>, base: PlusBase) -> Result<PropertyReport> {
    match base {
        PlusBase::Nc => super::check_nc(mu),
        PlusBase::Hnlc => super::check_lattice(mu, Sign::Negative, true),
        PlusBase::Jnrd => super::check_jnrd(mu),
        PlusBase::Cna => super::check_cna(mu),
        PlusBase::Ulc => Ok(super::check_ulc(mu)),
    }
}

/// Checks `base` on every measure obtained from μ by one of the fields of
/// [`plus_fields`] (optionally with conditioning limits) and a projection.
pub fn check_plus<W: Weight>(mu: &BinaryMeasure<W>, base: PlusBase, opts: &PlusOptions) -> Result<PropertyReport> {
    let n = mu.n();
    check_rank(n, MAX_PLUS_RANK, "field closure checks")?;
    let name = format!("{}+", base.name());
    if n < 2 {
        // every field and projection leaves at most one variable
        return Ok(PropertyReport::holds(name).with_note("fewer than two variables"));
    }
    let fields = plus_fields(n, opts);
    let limits: Vec<(usize, usize)> =
        if base.crosses_limits() { assignments_canonical(n) } else { vec![(0, 0)] };
    let found = fields.par_iter().enumerate().find_map_first(|(i, f)| {
        let w = ExternalField::finite(f.iter().map(W::from_rational).collect()).expect("positive field");
        let p = apply_field(mu, &w).ok()?.scaled();
        limits.iter().find_map(|&(fixed, ones)| {
            evaluate(base, &p, n, fixed, ones).map(|projection| (i, Hit { fixed, ones, projection }))
        })
    });
    let Some((i, hit)) = found else {
        let budget = (fields.len() * limits.len()) as u64;
        return Ok(PropertyReport::inconclusive(name, budget)
            .with_note(format!("no violation over {} fields x {} limits", fields.len(), limits.len())));
    };
    let entries: Vec<FieldValue<W>> = (0..n)
        .map(|j| match (hit.fixed >> j & 1, hit.ones >> j & 1) {
            (1, 1) => FieldValue::Infinite,
            (1, _) => FieldValue::Zero,
            _ => FieldValue::Finite(W::from_rational(&fields[i][j])),
        })
        .collect();
    let field = ExternalField::new(entries)?;
    let reduced = project(&apply_field(mu, &field)?, &hit.projection)?;
    let inner = check_base(&reduced, base)?;
    let strings = (0..n)
        .map(|j| match (hit.fixed >> j & 1, hit.ones >> j & 1) {
            (1, 1) => "inf".to_string(),
            (1, _) => "0".to_string(),
            _ => fields[i][j].render(),
        })
        .collect();
    let mut report =
        PropertyReport::fails(name, Witness::Field { field: strings, projection: hit.projection, inner: Box::new(inner) });
    report.budget_used = Some((i * limits.len() + 1) as u64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::RationalMeasure;
    use crate::weight::ratio;

    #[test]
    fn product_is_inconclusive() {
        let m = RationalMeasure::product_bernoulli(&[ratio(1, 3), ratio(1, 2), ratio(3, 4)]).unwrap();
        for base in [PlusBase::Nc, PlusBase::Hnlc, PlusBase::Jnrd, PlusBase::Cna, PlusBase::Ulc] {
            let r = check_plus(&m, base, &PlusOptions { samples: 5, seed: 3 }).unwrap();
            assert_eq!(r.verdict, super::super::Verdict::Inconclusive, "{base:?}");
            assert!(r.budget_used.unwrap() > 0);
        }
    }

    #[test]
    fn random_weights_have_three_digits() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let w = random_weight(&mut rng);
            let f = w.to_f64();
            assert!((1e-3 * 0.99..=1e3 * 1.01).contains(&f));
            let mut d = w.clone();
            while !d.is_integer() {
                d *= Rational::from_integer(10.into());
            }
            let digits = d.to_integer().to_string().trim_end_matches('0').len();
            assert!(digits <= 3, "{w}");
        }
    }

    #[test]
    fn field_witness_reproduces() {
        // nonzero correlation is hidden under conditioning on X3 = 1
        let mut w = vec![1i64; 8];
        w[0b100] = 4;
        w[0b111] = 4;
        let m = RationalMeasure::from_integers(3, &w).unwrap();
        let r = check_plus(&m, PlusBase::Nc, &PlusOptions { samples: 0, seed: 0 }).unwrap();
        let Some(Witness::Field { inner, .. }) = &r.witness else { panic!("{r:?}") };
        assert!(inner.fails_p());
    }
}
