//! Deciders for the negative-dependence hierarchy.
//!
//! Every checker returns a [`PropertyReport`]. A `fails` verdict always
//! carries a [`Witness`] that [`PropertyReport::recheck`] can confirm from
//! the measure alone.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod association;
pub mod bkr;
pub mod cna;
pub mod edge;
pub mod flow;
pub mod jnrd;
pub mod lattice_cond;
pub mod markov;
pub mod nc;
pub mod plus;
pub mod rank;
pub mod recheck;
pub mod relation;
pub mod stochastic;

pub use association::check_association;
pub use bkr::{check_bkrna, BkrMode};
pub use cna::check_cna;
pub use edge::check_upset_edge_correlation;
pub use jnrd::check_jnrd;
pub use lattice_cond::check_lattice;
pub use markov::{check_markov_monotone, ChainLaw};
pub use nc::check_nc;
pub use plus::{check_plus, PlusBase, PlusOptions};
pub use rank::{check_ulc, conditional_rank_monotone};
pub use relation::{covers_on_chain, stoch_relation, OrderedJointLaw, Relations};
pub use stochastic::{stochastic_covers, stochastic_dominates, DominanceMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

/// Counterexample data. Events are lists of configuration indices of the
/// full lattice; variables are 0-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `x`, `y` index the lattice of the projection onto `projection`.
    LatticePair { projection: Vec<usize>, x: usize, y: usize },
    /// Increasing events with `μ(F∩G)` on the wrong side of `μ(F)μ(G)`
    /// after conditioning.
    Association {
        conditioning: Vec<(usize, bool)>,
        block: Vec<usize>,
        f: Vec<usize>,
        g: Vec<usize>,
    },
    /// `μ(H | X_{Aᶜ} = upper) > μ(H | X_{Aᶜ} = lower)` with `lower < upper`.
    Regression { block: Vec<usize>, h: Vec<usize>, lower: usize, upper: usize },
    Covariance { e: usize, f: usize, covariance: String },
    BoxPair { a: Vec<usize>, b: Vec<usize> },
    /// Up-set on which the first measure has less mass than the second.
    UpSet { event: Vec<usize> },
    /// Configurations of the first measure whose mass exceeds that of the
    /// configurations of the second measure they may be matched to.
    HallSet { set: Vec<usize> },
    /// Up-set correlating negatively with every variable.
    EdgeUpSet { event: Vec<usize> },
    /// First violating index of a sequence, optionally after projection.
    Sequence { projection: Vec<usize>, index: usize },
    /// Adjacent nonempty rank levels `lower < upper` that are not ordered.
    RankLevels { lower: usize, upper: usize, inner: Box<PropertyReport> },
    /// External field (entries `"0"`, `"inf"` or a number), then projection.
    Field { field: Vec<String>, projection: Vec<usize>, inner: Box<PropertyReport> },
    Markov { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_used: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropertyReport {
    pub fn holds(property: impl Into<String>) -> Self {
        PropertyReport { property: property.into(), verdict: Verdict::Holds, witness: None, budget_used: None, note: None }
    }

    pub fn fails(property: impl Into<String>, witness: Witness) -> Self {
        PropertyReport {
            property: property.into(),
            verdict: Verdict::Fails,
            witness: Some(witness),
            budget_used: None,
            note: None,
        }
    }

    pub fn inconclusive(property: impl Into<String>, budget: u64) -> Self {
        PropertyReport {
            property: property.into(),
            verdict: Verdict::Inconclusive,
            witness: None,
            budget_used: Some(budget),
            note: None,
        }
    }

    pub fn from_witness(property: impl Into<String>, witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => Self::fails(property, w),
            None => Self::holds(property),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn holds_p(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails_p(&self) -> bool {
        self.verdict == Verdict::Fails
    }
}

/// Identifiers accepted by the dispatcher and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PropertyId {
    Nc,
    Nlc,
    Plc,
    Hnlc,
    Hplc,
    Na,
    Pa,
    PaDisjoint,
    Cna,
    Jnrd,
    Bkrna,
    BkrnaUpsets,
    Ulc,
    EdgeCorrelation,
    RankMonotone,
    RankCover,
}

impl PropertyId {
    pub const ALL: [PropertyId; 16] = [
        PropertyId::Nc,
        PropertyId::Nlc,
        PropertyId::Plc,
        PropertyId::Hnlc,
        PropertyId::Hplc,
        PropertyId::Na,
        PropertyId::Pa,
        PropertyId::PaDisjoint,
        PropertyId::Cna,
        PropertyId::Jnrd,
        PropertyId::Bkrna,
        PropertyId::BkrnaUpsets,
        PropertyId::Ulc,
        PropertyId::EdgeCorrelation,
        PropertyId::RankMonotone,
        PropertyId::RankCover,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyId::Nc => "nc",
            PropertyId::Nlc => "nlc",
            PropertyId::Plc => "plc",
            PropertyId::Hnlc => "hnlc",
            PropertyId::Hplc => "hplc",
            PropertyId::Na => "na",
            PropertyId::Pa => "pa",
            PropertyId::PaDisjoint => "pa-disjoint",
            PropertyId::Cna => "cna",
            PropertyId::Jnrd => "jnrd",
            PropertyId::Bkrna => "bkrna",
            PropertyId::BkrnaUpsets => "bkrna-upsets",
            PropertyId::Ulc => "ulc",
            PropertyId::EdgeCorrelation => "edge-correlation",
            PropertyId::RankMonotone => "rank-monotone",
            PropertyId::RankCover => "rank-cover",
        }
    }

    /// The base this id names for `+` checks, if it has one.
    pub fn plus_base(self) -> Option<PlusBase> {
        match self {
            PropertyId::Nc => Some(PlusBase::Nc),
            PropertyId::Hnlc => Some(PlusBase::Hnlc),
            PropertyId::Jnrd => Some(PlusBase::Jnrd),
            PropertyId::Cna => Some(PlusBase::Cna),
            PropertyId::Ulc => Some(PlusBase::Ulc),
            _ => None,
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for PropertyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for PropertyId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for PropertyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PropertyId::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Unknown(s.to_string()))
    }
}

/// Runs the exact checker named by `id` with its default options.
pub fn check_property<W: crate::Weight>(
    mu: &crate::BinaryMeasure<W>,
    id: PropertyId,
) -> Result<PropertyReport> {
    match id {
        PropertyId::Nc => check_nc(mu),
        PropertyId::Nlc => check_lattice(mu, Sign::Negative, false),
        PropertyId::Plc => check_lattice(mu, Sign::Positive, false),
        PropertyId::Hnlc => check_lattice(mu, Sign::Negative, true),
        PropertyId::Hplc => check_lattice(mu, Sign::Positive, true),
        PropertyId::Na => check_association(mu, Sign::Negative, true),
        PropertyId::Pa => check_association(mu, Sign::Positive, false),
        PropertyId::PaDisjoint => check_association(mu, Sign::Positive, true),
        PropertyId::Cna => check_cna(mu),
        PropertyId::Jnrd => check_jnrd(mu),
        PropertyId::Bkrna => check_bkrna(mu, BkrMode::AllEvents),
        PropertyId::BkrnaUpsets => check_bkrna(mu, BkrMode::UpsetsOnly),
        PropertyId::Ulc => Ok(check_ulc(mu)),
        PropertyId::EdgeCorrelation => check_upset_edge_correlation(mu),
        PropertyId::RankMonotone => conditional_rank_monotone(mu, false),
        PropertyId::RankCover => conditional_rank_monotone(mu, true),
    }
}

/// Configuration indices of the full lattice whose bits on `vars` form a
/// member of `compact_mask` (an event on the `vars`-sublattice).
pub(crate) fn lift_event(n: usize, vars: &[usize], compact_mask: u64) -> Vec<usize> {
    (0..1usize << n)
        .filter(|&x| compact_mask >> crate::lattice::gather(x, vars) & 1 == 1)
        .collect()
}

/// Canonical order of variable subsets: by size, then by mask value.
pub(crate) fn subsets_canonical(n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..1usize << n).collect();
    v.sort_by_key(|s| (s.count_ones(), *s));
    v
}

pub(crate) fn vars_of(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|j| mask >> j & 1 == 1).collect()
}

/// Partial assignments `(fixed mask, ones mask)` in canonical order: by
/// number of fixed variables, then fixed mask, then values.
pub(crate) fn assignments_canonical(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for fixed in subsets_canonical(n) {
        for ones in crate::lattice::submasks(fixed) {
            out.push((fixed, ones));
        }
    }
    out
}

pub(crate) fn assignment_pairs(n: usize, fixed: usize, ones: usize) -> Vec<(usize, bool)> {
    (0..n).filter(|j| fixed >> j & 1 == 1).map(|j| (j, ones >> j & 1 == 1)).collect()
}

/// Scaled atoms of the conditional law given `(fixed, ones)`, indexed by
/// the compact configuration of the free variables.
pub(crate) fn restrict<R: crate::weight::Ring>(p: &[R], n: usize, fixed: usize, ones: usize) -> (Vec<usize>, Vec<R>) {
    let free: Vec<usize> = (0..n).filter(|j| fixed >> j & 1 == 0).collect();
    let vals = (0..1usize << free.len())
        .map(|c| p[crate::lattice::scatter(c, &free) | ones].clone())
        .collect();
    (free, vals)
}

/// Scaled atoms of the projection onto `vars`.
pub(crate) fn marginal<R: crate::weight::Ring>(p: &[R], vars: &[usize]) -> Vec<R> {
    let mut out = vec![R::zero(); 1 << vars.len()];
    for (x, v) in p.iter().enumerate() {
        if !v.is_exact_zero() {
            out[crate::lattice::gather(x, vars)].add_assign(v);
        }
    }
    out
}

pub(crate) fn total<R: crate::weight::Ring>(p: &[R]) -> R {
    let mut t = R::zero();
    for v in p {
        t.add_assign(v);
    }
    t
}

pub(crate) fn mask_sum<R: crate::weight::Ring>(p: &[R], mask: u64) -> R {
    let mut t = R::zero();
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        t.add_assign(&p[i]);
        m &= m - 1;
    }
    t
}
