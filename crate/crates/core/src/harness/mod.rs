//! Reproduction of the worked examples and seeded counterexample search.

mod figure1;
mod generate;
mod repro;

pub use figure1::{verify_figure1, Figure1Table};
pub use generate::{
    convolution_witness, random_graph, random_measure, random_sequence, random_ulc, random_ulc_instance, Strategy,
};
pub use repro::{example1_cna_threshold, reproduce_example, ExampleId, ReproCheck, ReproReport};

use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_rank, Error, Result};
use crate::measure::{AnyMeasure, BinaryMeasure};
use crate::ops::{condition_projected, project};
use crate::props::{
    check_plus, check_property, check_ulc, stochastic_covers, PlusBase, PlusOptions,
    PropertyId, PropertyReport, Witness,
};
use crate::weight::{Backend, Weight};
use crate::with_measure;

/// Format version of serialized reports.
pub const REPORT_VERSION: u32 = 1;
/// Largest rank searched when no `+` property is evaluated per candidate.
pub const MAX_SEARCH_RANK: usize = 5;
/// Largest rank searched when a `+` property is evaluated per candidate.
pub const MAX_PLUS_SEARCH_RANK: usize = 4;

/// Candidates evaluated in parallel between sequential scans.
const CHUNK: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjectureId {
    /// CNA+, JNRD+ and h-NLC+ coincide (searched as h-NLC+ ⟹ CNA+).
    Horizontal,
    HnlcImpliesNa,
    /// NA ⟹ ULC.
    AlwaysUlc,
    /// Sums over subsets in the RC, urn and exclusion models are ULC.
    UlcExamples,
    /// ULC+ ⟹ CNA.
    UlcImpliesNa,
    /// ULC sequences are closed under convolution.
    UlcConvolve,
    /// Conditional laws on consecutive rank levels are ordered.
    RankCover,
    /// Given `X_n = 0` covers given `X_n = 1`.
    NdCover,
    /// Positive association on disjoint blocks ⟹ full positive association.
    QuestionDisjointPa,
    /// A CNA measure that is not h-NLC+.
    Figure1Strictness,
}

impl ConjectureId {
    pub const ALL: [ConjectureId; 10] = [
        ConjectureId::Horizontal,
        ConjectureId::HnlcImpliesNa,
        ConjectureId::AlwaysUlc,
        ConjectureId::UlcExamples,
        ConjectureId::UlcImpliesNa,
        ConjectureId::UlcConvolve,
        ConjectureId::RankCover,
        ConjectureId::NdCover,
        ConjectureId::QuestionDisjointPa,
        ConjectureId::Figure1Strictness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConjectureId::Horizontal => "horizontal",
            ConjectureId::HnlcImpliesNa => "hnlc-implies-na",
            ConjectureId::AlwaysUlc => "always-ulc",
            ConjectureId::UlcExamples => "ulc-examples",
            ConjectureId::UlcImpliesNa => "ulc-implies-na",
            ConjectureId::UlcConvolve => "ulc-convolve",
            ConjectureId::RankCover => "rank-cover",
            ConjectureId::NdCover => "nd-cover",
            ConjectureId::QuestionDisjointPa => "question-disjoint-pa",
            ConjectureId::Figure1Strictness => "figure1-strictness",
        }
    }
}

impl std::fmt::Display for ConjectureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConjectureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ConjectureId::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::Unknown(s.to_string()))
    }
}

/// A checkable statement about a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "check", content = "id")]
pub enum Check {
    /// Every candidate satisfies it (model membership).
    Always,
    Exact(PropertyId),
    /// A `+` property: only a field witness is conclusive.
    Plus(PlusBase),
    /// ULC of the number of ones on every nonempty set of variables.
    UlcSums,
    /// ULC of the two factor blocks split at the recorded position.
    UlcFactors,
    /// Given the last variable 0 covers given it 1.
    LastCovers,
}

impl Check {
    fn uses_plus(self) -> bool {
        matches!(self, Check::Plus(_))
    }
}

/// Hypothesis, conclusion and candidate source of one search target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureSpec {
    pub id: ConjectureId,
    pub hypothesis: Check,
    pub conclusion: Check,
}

impl ConjectureSpec {
    /// Default statement for `id`; rank-cover uses the plain CNA hypothesis.
    pub fn new(id: ConjectureId) -> Self {
        use Check::*;
        let (hypothesis, conclusion) = match id {
            ConjectureId::Horizontal => (Plus(PlusBase::Hnlc), Plus(PlusBase::Cna)),
            ConjectureId::HnlcImpliesNa => (Exact(PropertyId::Hnlc), Exact(PropertyId::Na)),
            ConjectureId::AlwaysUlc => (Exact(PropertyId::Na), Exact(PropertyId::Ulc)),
            ConjectureId::UlcExamples => (Always, UlcSums),
            ConjectureId::UlcImpliesNa => (Plus(PlusBase::Ulc), Exact(PropertyId::Cna)),
            ConjectureId::UlcConvolve => (UlcFactors, Exact(PropertyId::Ulc)),
            ConjectureId::RankCover => (Exact(PropertyId::Cna), Exact(PropertyId::RankMonotone)),
            ConjectureId::NdCover => (Plus(PlusBase::Cna), LastCovers),
            ConjectureId::QuestionDisjointPa => (Exact(PropertyId::PaDisjoint), Exact(PropertyId::Pa)),
            ConjectureId::Figure1Strictness => (Exact(PropertyId::Cna), Plus(PlusBase::Hnlc)),
        };
        ConjectureSpec { id, hypothesis, conclusion }
    }

    /// The statement as conjectured, with the `+` hypothesis where the
    /// default uses a plain one.
    pub fn strengthened(id: ConjectureId) -> Self {
        let mut s = Self::new(id);
        if id == ConjectureId::RankCover {
            s.hypothesis = Check::Plus(PlusBase::Cna);
        }
        s
    }

    fn uses_plus(&self) -> bool {
        self.hypothesis.uses_plus() || self.conclusion.uses_plus()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub n: usize,
    pub budget: u64,
    pub seed: u64,
    /// Random fields per `+` check on a candidate.
    pub inner_samples: usize,
}

impl SearchOptions {
    pub fn new(n: usize, budget: u64, seed: u64) -> Self {
        SearchOptions { n, budget, seed, inner_samples: 20 }
    }
}

/// A candidate on which the conclusion fails, with everything needed to
/// re-verify it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub index: u64,
    pub source: String,
    pub n: usize,
    pub backend: Backend,
    pub probs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<usize>,
    pub hypothesis: PropertyReport,
    pub conclusion: PropertyReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub version: u32,
    pub conjecture: ConjectureId,
    pub spec: ConjectureSpec,
    pub options: SearchOptions,
    pub tested: u64,
    /// Candidates on which the hypothesis failed.
    pub skipped: u64,
    /// Conclusion failures under a `+` hypothesis that was only not
    /// falsified at the inner budget; never reported as counterexamples.
    pub unconfirmed: u64,
    pub counterexample: Option<Counterexample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_unconfirmed: Option<Counterexample>,
    pub elapsed_ms: u64,
}

impl SearchReport {
    pub fn found(&self) -> bool {
        self.counterexample.is_some()
    }

    pub fn status(&self) -> &'static str {
        if self.found() {
            "found"
        } else {
            "none-found"
        }
    }

    /// Re-checks the counterexample from its serialized fields alone.
    pub fn reverify(&self) -> Result<bool> {
        match &self.counterexample {
            Some(c) => c.reverify(&self.spec, &self.options),
            None => Ok(true),
        }
    }
}

impl Counterexample {
    pub fn measure(&self) -> Result<AnyMeasure> {
        fn parse<W: Weight>(n: usize, probs: &[String]) -> Result<BinaryMeasure<W>> {
            let w = probs
                .iter()
                .map(|s| W::parse(s).ok_or_else(|| Error::Parse(format!("bad weight `{s}`"))))
                .collect::<Result<Vec<_>>>()?;
            BinaryMeasure::from_probs(n, w)
        }
        Ok(match self.backend {
            Backend::Rational => AnyMeasure::Rational(parse(self.n, &self.probs)?),
            Backend::Float => AnyMeasure::Float(parse(self.n, &self.probs)?),
        })
    }

    /// The hypothesis is not falsified and the conclusion fails, with any
    /// witness confirmed by direct recomputation.
    pub fn reverify(&self, spec: &ConjectureSpec, opts: &SearchOptions) -> Result<bool> {
        let mu = self.measure()?;
        let plus = PlusOptions { samples: opts.inner_samples, seed: inner_seed(opts.seed, self.index) };
        let (hyp, _) = evaluate(spec.hypothesis, &mu, self.split, &plus)?;
        if hyp.fails_p() {
            return Ok(false);
        }
        let (concl, _) = evaluate(spec.conclusion, &mu, self.split, &plus)?;
        if !concl.fails_p() {
            return Ok(false);
        }
        if concl != self.conclusion {
            return Ok(false);
        }
        match &concl.witness {
            Some(Witness::Field { .. }) | Some(Witness::LatticePair { .. }) | Some(Witness::Association { .. }) => {
                with_measure!(&mu, m => concl.recheck(m))
            }
            _ => Ok(true),
        }
    }
}

/// Seed of the inner `+` checks for candidate `i`.
fn inner_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ i.wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// Runs `check` on `mu`. The flag is true when a `+` verdict is only
/// "no violation found".
fn evaluate(check: Check, mu: &AnyMeasure, split: Option<usize>, plus: &PlusOptions) -> Result<(PropertyReport, bool)> {
    Ok(match check {
        Check::Always => (PropertyReport::holds("model"), false),
        Check::Exact(id) => (with_measure!(mu, m => check_property(m, id))?, false),
        Check::Plus(base) => {
            // the plain property is implied, so test it first
            let plain: PropertyId = base.name().parse()?;
            let r = with_measure!(mu, m => check_property(m, plain))?;
            if r.fails_p() {
                (r, false)
            } else {
                let r = with_measure!(mu, m => check_plus(m, base, plus))?;
                let open = !r.fails_p();
                (r, open)
            }
        }
        Check::UlcSums => (with_measure!(mu, m => ulc_of_sums(m))?, false),
        Check::UlcFactors => {
            let k = split.ok_or_else(|| Error::InvalidArgument("missing factor split".into()))?;
            let n = mu.n();
            let left: Vec<usize> = (0..k).collect();
            let right: Vec<usize> = (k..n).collect();
            let r = with_measure!(mu, m => {
                let a = check_ulc(&project(m, &left)?);
                let b = check_ulc(&project(m, &right)?);
                if a.fails_p() { a } else { b }
            });
            (r, false)
        }
        Check::LastCovers => (with_measure!(mu, m => last_covers(m))?, false),
    })
}

/// ULC of `Σ_{e∈S} X_e` for every nonempty `S`, in canonical order.
pub fn ulc_of_sums<W: Weight>(mu: &BinaryMeasure<W>) -> Result<PropertyReport> {
    for s in crate::props::subsets_canonical(mu.n()) {
        if s == 0 {
            continue;
        }
        let vars: Vec<usize> = (0..mu.n()).filter(|j| s >> j & 1 == 1).collect();
        let r = check_ulc(&project(mu, &vars)?);
        if let Some(Witness::Sequence { index, .. }) = r.witness {
            return Ok(PropertyReport::fails("ulc-sums", Witness::Sequence { projection: vars, index }));
        }
    }
    Ok(PropertyReport::holds("ulc-sums"))
}

/// `(μ | X_n = 0)` covers `(μ | X_n = 1)` on the first `n − 1` variables;
/// holds vacuously when either conditional is undefined.
pub fn last_covers<W: Weight>(mu: &BinaryMeasure<W>) -> Result<PropertyReport> {
    let n = mu.n();
    if n < 2 {
        return Err(Error::InvalidArgument("covering needs at least two variables".into()));
    }
    let (Ok(lo), Ok(hi)) = (condition_projected(mu, &[(n - 1, false)]), condition_projected(mu, &[(n - 1, true)]))
    else {
        return Ok(PropertyReport::holds("last-covers").with_note("a conditional is undefined"));
    };
    let mut r = stochastic_covers(&lo, &hi)?;
    r.property = "last-covers".into();
    Ok(r)
}

enum Outcome {
    Skipped,
    Passed,
    Unconfirmed(Counterexample),
    Found(Counterexample),
}

struct Candidate {
    source: String,
    measure: AnyMeasure,
    split: Option<usize>,
}

fn candidate(id: ConjectureId, i: u64, opts: &SearchOptions, rng: &mut ChaCha8Rng) -> Result<Candidate> {
    let n = opts.n;
    match id {
        ConjectureId::UlcExamples => {
            let (source, measure) = random_ulc_instance(i, n, rng)?;
            Ok(Candidate { source, measure, split: None })
        }
        ConjectureId::UlcConvolve => {
            let la = rng.gen_range(1..=n);
            let lb = n + 1 - la;
            let draw = |len: usize, rng: &mut ChaCha8Rng| {
                if rng.gen_bool(0.8) {
                    random_ulc(len + 1, rng)
                } else {
                    random_sequence(len + 1, rng)
                }
            };
            let a = draw(la, rng);
            let b = draw(lb, rng);
            let measure = convolution_witness(&a, &b)?.into();
            Ok(Candidate { source: format!("convolution {la}+{lb}"), measure, split: Some(la) })
        }
        _ => {
            // ranks 2..=n in turn, then the four strategies
            let ranks = (n - 1) as u64;
            let rank = 2 + (i % ranks) as usize;
            let strategy = Strategy::ALL[((i / ranks) % 4) as usize];
            let m = random_measure(strategy, rank, rng)?;
            Ok(Candidate { source: format!("{} n={rank}", strategy.name()), measure: m.into(), split: None })
        }
    }
}

fn run_one(spec: &ConjectureSpec, opts: &SearchOptions, i: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(i);
    let c = candidate(spec.id, i, opts, &mut rng)?;
    let plus = PlusOptions { samples: opts.inner_samples, seed: inner_seed(opts.seed, i) };
    let (hyp, hyp_open) = evaluate(spec.hypothesis, &c.measure, c.split, &plus)?;
    if hyp.fails_p() {
        return Ok(Outcome::Skipped);
    }
    let (concl, _) = evaluate(spec.conclusion, &c.measure, c.split, &plus)?;
    if !concl.fails_p() {
        return Ok(Outcome::Passed);
    }
    let cx = Counterexample {
        index: i,
        source: c.source,
        n: c.measure.n(),
        backend: c.measure.backend(),
        probs: c.measure.rendered(),
        split: c.split,
        hypothesis: hyp,
        conclusion: concl,
    };
    Ok(if hyp_open { Outcome::Unconfirmed(cx) } else { Outcome::Found(cx) })
}

/// Evaluates `budget` seeded candidates and reports the first
/// counterexample in candidate order. Candidate `i` draws from stream `i`
/// of the seed, so results do not depend on the worker count.
pub fn search(spec: &ConjectureSpec, opts: &SearchOptions) -> Result<SearchReport> {
    let start = Instant::now();
    if opts.n < 2 {
        return Err(Error::InvalidArgument("searches need rank at least 2".into()));
    }
    let max = if spec.uses_plus() { MAX_PLUS_SEARCH_RANK } else { MAX_SEARCH_RANK };
    check_rank(opts.n, max, "conjecture search")?;
    let mut report = SearchReport {
        version: REPORT_VERSION,
        conjecture: spec.id,
        spec: *spec,
        options: *opts,
        tested: 0,
        skipped: 0,
        unconfirmed: 0,
        counterexample: None,
        first_unconfirmed: None,
        elapsed_ms: 0,
    };
    let mut next = 0u64;
    'outer: while next < opts.budget {
        let end = (next + CHUNK).min(opts.budget);
        let outcomes: Vec<Result<Outcome>> = (next..end).into_par_iter().map(|i| run_one(spec, opts, i)).collect();
        for o in outcomes {
            report.tested += 1;
            match o? {
                Outcome::Skipped => report.skipped += 1,
                Outcome::Passed => {}
                Outcome::Unconfirmed(c) => {
                    report.unconfirmed += 1;
                    report.first_unconfirmed.get_or_insert(c);
                }
                Outcome::Found(c) => {
                    report.counterexample = Some(c);
                    break 'outer;
                }
            }
        }
        next = end;
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
