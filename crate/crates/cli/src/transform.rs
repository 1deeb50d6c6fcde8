//! `negdep transform`: closure operations on a measure file.
//!
//! Variables and vertices are numbered from 1 here.

use std::path::PathBuf;

use clap::Args;
use negdep::ops::{self, ExternalField, FieldValue, LogConcaveWeights, RateSegment};
use negdep::{AnyMeasure, BinaryMeasure, Weight};

use crate::error::{CliError, CliResult};
use crate::models::{parse_band, parse_list, parse_one};

#[derive(Args, Debug)]
pub struct TransformArgs {
    /// project, condition, field, truncate, rank-rescale, symmetrize,
    /// relabel, stir, stir-continuous or product.
    #[arg(long)]
    pub op: String,
    pub input: PathBuf,
    /// Kept variables for project, e.g. `1,3`.
    #[arg(long)]
    pub vars: Option<String>,
    /// Assignment for condition, e.g. `1=1,3=0`.
    #[arg(long)]
    pub assign: Option<String>,
    /// Drop the conditioned variables instead of keeping them fixed.
    #[arg(long)]
    pub drop: bool,
    /// Field entries, one per variable: a positive number, `0` or `inf`.
    #[arg(long, visible_alias = "weights")]
    pub field: Option<String>,
    /// Rank band `a:b` for truncate.
    #[arg(long)]
    pub band: Option<String>,
    /// Log-concave rank weights q_0,...,q_n for rank-rescale.
    #[arg(long)]
    pub q: Option<String>,
    /// Permutation for relabel: entry e is the source variable of e.
    #[arg(long)]
    pub perm: Option<String>,
    /// Stirring steps `i-j:eps`, comma separated, applied left to right.
    #[arg(long)]
    pub schedule: Option<String>,
    /// Rate segments `duration:i-j=rate,i-j=rate;duration:...`.
    #[arg(long)]
    pub segments: Option<String>,
    /// Second factor for product.
    #[arg(long)]
    pub with: Option<PathBuf>,
    #[arg(long)]
    pub backend: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn need<'a>(v: &'a Option<String>, flag: &str, op: &str) -> CliResult<&'a str> {
    v.as_deref().ok_or_else(|| CliError::usage(format!("{op} needs --{flag}")))
}

/// 1-based variable number to 0-based index.
fn var(s: &str) -> CliResult<usize> {
    match s.trim().parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v - 1),
        _ => Err(CliError::usage(format!("`{s}` is not a variable number (1-based)"))),
    }
}

fn vars(s: &str) -> CliResult<Vec<usize>> {
    s.split(',').map(var).collect()
}

fn pair(s: &str) -> CliResult<(usize, usize)> {
    let (i, j) = s.split_once('-').ok_or_else(|| CliError::usage(format!("`{s}` is not a pair i-j")))?;
    Ok((var(i)?, var(j)?))
}

fn assignment(s: &str) -> CliResult<Vec<(usize, bool)>> {
    s.split(',')
        .map(|item| {
            let (j, v) = item.split_once('=').ok_or_else(|| CliError::usage(format!("`{item}` is not j=0 or j=1")))?;
            let b = match v.trim() {
                "0" => false,
                "1" => true,
                _ => return Err(CliError::usage(format!("`{item}` is not j=0 or j=1"))),
            };
            Ok((var(j)?, b))
        })
        .collect()
}

fn field<W: Weight>(s: &str) -> CliResult<ExternalField<W>> {
    let entries = s
        .split(',')
        .map(|e| match e.trim() {
            "inf" | "infinity" => Ok(FieldValue::Infinite),
            t => {
                let w: W = parse_one(t)?;
                Ok(if w.is_zero() { FieldValue::Zero } else { FieldValue::Finite(w) })
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    ExternalField::new(entries).map_err(CliError::op)
}

fn segments(s: &str) -> CliResult<Vec<RateSegment>> {
    s.split(';')
        .map(|seg| {
            let bad = || CliError::usage(format!("segment `{seg}` is not duration:i-j=rate,..."));
            let (d, rates) = seg.split_once(':').ok_or_else(bad)?;
            let duration = d.trim().parse::<f64>().map_err(|_| bad())?;
            let rates = rates
                .split(',')
                .map(|r| {
                    let (p, v) = r.split_once('=').ok_or_else(bad)?;
                    Ok((pair(p)?, v.trim().parse::<f64>().map_err(|_| bad())?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(RateSegment { duration, rates })
        })
        .collect()
}

fn apply<W: Weight>(a: &TransformArgs, mu: &BinaryMeasure<W>, other: Option<&BinaryMeasure<W>>) -> CliResult<AnyMeasure>
where
    AnyMeasure: From<BinaryMeasure<W>>,
{
    let op = a.op.as_str();
    let r = match op {
        "project" => ops::project(mu, &vars(need(&a.vars, "vars", op)?)?),
        "condition" => {
            let asg = assignment(need(&a.assign, "assign", op)?)?;
            if a.drop {
                ops::condition_projected(mu, &asg)
            } else {
                ops::condition(mu, &asg)
            }
        }
        "field" => ops::apply_field(mu, &field(need(&a.field, "field", op)?)?),
        "truncate" => {
            let (lo, hi) = parse_band(need(&a.band, "band", op)?)?;
            ops::truncate(mu, lo, hi)
        }
        "rank-rescale" => LogConcaveWeights::new(parse_list(need(&a.q, "q", op)?)?)
            .and_then(|q| ops::rank_rescale(mu, &q)),
        "symmetrize" => Ok(ops::symmetrize(mu)),
        "relabel" => ops::relabel(mu, &vars(need(&a.perm, "perm", op)?)?),
        "stir" => {
            let steps = need(&a.schedule, "schedule", op)?
                .split(',')
                .map(|s| {
                    let (p, e) = s.split_once(':').ok_or_else(|| CliError::usage(format!("`{s}` is not i-j:eps")))?;
                    Ok((pair(p)?, parse_one::<W>(e)?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            ops::stir(mu, &steps)
        }
        "stir-continuous" => {
            let segs = segments(need(&a.segments, "segments", op)?)?;
            return ops::stir_continuous(mu, &segs).map(AnyMeasure::Float).map_err(CliError::op);
        }
        "product" => ops::product(mu, other.expect("product loads --with")),
        other => return Err(CliError::usage(format!("unknown operation `{other}`"))),
    };
    r.map(AnyMeasure::from).map_err(CliError::op)
}

/// Labels of the output variables, where the operation keeps track of them.
fn out_labels(a: &TransformArgs, labels: Option<Vec<String>>, n_out: usize) -> Option<Vec<String>> {
    let labels = labels?;
    let picked = match a.op.as_str() {
        "project" => vars(a.vars.as_deref()?).ok()?.iter().map(|&j| labels.get(j).cloned()).collect::<Option<Vec<_>>>()?,
        "condition" if a.drop => {
            let fixed: Vec<usize> = assignment(a.assign.as_deref()?).ok()?.iter().map(|p| p.0).collect();
            labels.iter().enumerate().filter(|(j, _)| !fixed.contains(j)).map(|(_, l)| l.clone()).collect()
        }
        "product" | "relabel" => return None,
        _ => labels,
    };
    (picked.len() == n_out).then_some(picked)
}

pub fn cmd_transform(a: &TransformArgs) -> CliResult<()> {
    let backend = a.backend.as_deref().map(|b| b.parse().map_err(CliError::usage)).transpose()?;
    let text = crate::read_file(&a.input)?;
    let loaded = negdep::io::MeasureFile::parse(&text).and_then(|f| f.load(backend)).map_err(CliError::input)?;
    for w in &loaded.warnings {
        eprintln!("warning: {}: {w}", a.input.display());
    }
    let other = match (&a.with, a.op.as_str()) {
        (Some(p), "product") => Some(crate::load_measure(p, Some(loaded.measure.backend()))?),
        (None, "product") => return Err(CliError::usage("product needs --with")),
        _ => None,
    };
    let out = match (&loaded.measure, &other) {
        (AnyMeasure::Rational(m), Some(AnyMeasure::Rational(o))) => apply(a, m, Some(o)),
        (AnyMeasure::Float(m), Some(AnyMeasure::Float(o))) => apply(a, m, Some(o)),
        (AnyMeasure::Rational(m), _) => apply(a, m, None),
        (AnyMeasure::Float(m), _) => apply(a, m, None),
    }?;
    let labels = out_labels(a, loaded.labels, out.n());
    crate::write_measure(&out, labels, a.out.as_deref())
}
