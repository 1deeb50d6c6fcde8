//! `negdep build`: measures from the model zoo.

use std::path::PathBuf;

use clap::Args;
use negdep::io::GraphFile;
use negdep::zoo::{self, GraphSpec, MeasureTree};
use negdep::{AnyMeasure, Backend, BinaryMeasure, Config, Rational, Weight};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// spanning-tree, forest, random-cluster, exclusion, urns, exchangeable,
    /// random-tree, ex1, ex1-printed, ex2 or five-point.
    #[arg(long)]
    pub model: String,
    /// Graph file (`{"vertices", "edges", "weights"?, "rates"?}`, 0-based vertices).
    #[arg(long, group = "g")]
    pub graph: Option<PathBuf>,
    /// Complete graph on K vertices.
    #[arg(long, group = "g", value_name = "K")]
    pub complete: Option<usize>,
    /// Path on K vertices.
    #[arg(long, group = "g", value_name = "K")]
    pub path: Option<usize>,
    /// Cycle on K vertices.
    #[arg(long, group = "g", value_name = "K")]
    pub cycle: Option<usize>,
    /// rational or float (default: rational, float for exclusion).
    #[arg(long)]
    pub backend: Option<String>,
    /// Edge-count band `a:b` for forests.
    #[arg(long)]
    pub band: Option<String>,
    /// Comma separated. Random-cluster: edge probability, one value or one
    /// per edge. Urns: drop probability of each urn, summing to 1
    /// (default: uniform over --urns).
    #[arg(long)]
    pub p: Option<String>,
    /// Cluster weight for random-cluster.
    #[arg(long)]
    pub q: Option<String>,
    /// Initial exclusion state as a 0/1 string over the vertices.
    #[arg(long)]
    pub eta0: Option<String>,
    /// Exclusion time.
    #[arg(long)]
    pub t: Option<f64>,
    /// Number of balls dropped (urns).
    #[arg(long, visible_alias = "balls")]
    pub k: Option<u32>,
    /// Number of urns, when --p is omitted.
    #[arg(long)]
    pub urns: Option<usize>,
    /// Rank sequence a_0,...,a_n summing to 1 (exchangeable).
    #[arg(long, visible_alias = "rank")]
    pub ranks: Option<String>,
    /// Leaf count (random-tree).
    #[arg(long)]
    pub leaves: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// ε for the worked examples.
    #[arg(long)]
    pub eps: Option<String>,
    /// Output measure file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_list<W: Weight>(s: &str) -> CliResult<Vec<W>> {
    s.split(',').map(parse_one).collect()
}

pub fn parse_one<W: Weight>(s: &str) -> CliResult<W> {
    W::parse(s).ok_or_else(|| CliError::usage(format!("invalid number `{s}`")))
}

pub fn parse_band(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::usage(format!("band `{s}` is not of the form a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn need<'a, T>(v: &'a Option<T>, flag: &str, model: &str) -> CliResult<&'a T> {
    v.as_ref().ok_or_else(|| CliError::usage(format!("{model} needs --{flag}")))
}

fn graph(a: &BuildArgs) -> CliResult<GraphSpec> {
    if let Some(path) = &a.graph {
        let text = crate::read_file(path)?;
        return GraphFile::parse(&text).and_then(|f| f.to_graph()).map_err(CliError::input);
    }
    match (a.complete, a.path, a.cycle) {
        (Some(k), _, _) => Ok(GraphSpec::complete(k)),
        (_, Some(k), _) => Ok(GraphSpec::path(k)),
        (_, _, Some(k)) => Ok(GraphSpec::cycle(k)),
        _ => Err(CliError::usage(format!("{} needs a graph (--graph, --complete, --path or --cycle)", a.model))),
    }
}

fn generic<W: Weight>(a: &BuildArgs) -> CliResult<Option<BinaryMeasure<W>>> {
    let m = a.model.as_str();
    let r = match m {
        "spanning-tree" => zoo::spanning_tree_measure(&graph(a)?),
        "forest" => zoo::forest_measure(&graph(a)?, a.band.as_deref().map(parse_band).transpose()?),
        "random-cluster" => {
            let p: Vec<W> = parse_list(need(&a.p, "p", m)?)?;
            let q: W = parse_one(need(&a.q, "q", m)?)?;
            zoo::random_cluster_measure(&graph(a)?, &p, &q)
        }
        "urns" => {
            let p: Vec<W> = match (&a.p, a.urns) {
                (Some(p), _) => parse_list(p)?,
                (None, Some(n)) if n > 0 => vec![W::from_ratio(1, n as i64); n],
                _ => return Err(CliError::usage("urns needs --p or a positive --urns")),
            };
            if a.urns.is_some_and(|n| n != p.len()) {
                return Err(CliError::usage("--urns disagrees with the length of --p"));
            }
            zoo::urn_measure(p.len(), *need(&a.k, "balls", m)?, &p)
        }
        "exchangeable" => zoo::exchangeable_measure(&parse_list::<W>(need(&a.ranks, "ranks", m)?)?),
        _ => return Ok(None),
    };
    r.map(Some).map_err(CliError::op)
}

fn rational_only(a: &BuildArgs) -> CliResult<AnyMeasure> {
    let m = a.model.as_str();
    let eps = || -> CliResult<Rational> { parse_one(need(&a.eps, "eps", m)?) };
    let mu = match m {
        "ex1" => zoo::example1(&eps()?),
        "ex1-printed" => zoo::example1_as_printed(&eps()?),
        "ex2" => zoo::example2(&eps()?),
        "five-point" => Ok(zoo::five_point()),
        "random-tree" => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            MeasureTree::random(*need(&a.leaves, "leaves", m)?, &mut rng)
                .and_then(|t| zoo::tree_class_measure::<Rational>(&t))
                .map(|b| b.measure)
        }
        "exclusion" => {
            let g = graph(a)?;
            let eta: Config = need(&a.eta0, "eta0", m)?.parse().map_err(CliError::usage)?;
            if eta.n() != g.vertices {
                return Err(CliError::usage(format!("--eta0 must have {} entries", g.vertices)));
            }
            return zoo::exclusion_measure(&g, eta.index(), *need(&a.t, "t", m)?)
                .map(AnyMeasure::Float)
                .map_err(CliError::op);
        }
        other => return Err(CliError::usage(format!("unknown model `{other}`"))),
    };
    mu.map(AnyMeasure::Rational).map_err(CliError::op)
}

pub fn cmd_build(a: &BuildArgs) -> CliResult<()> {
    let backend = match &a.backend {
        Some(b) => b.parse().map_err(CliError::usage)?,
        None if a.model == "exclusion" => Backend::Float,
        None => Backend::Rational,
    };
    let mu = match backend {
        Backend::Rational => generic::<Rational>(a)?.map(AnyMeasure::Rational),
        Backend::Float => generic::<f64>(a)?.map(AnyMeasure::Float),
    };
    let mu = match mu {
        Some(m) => m,
        None => rational_only(a)?.into_backend(backend).map_err(CliError::op)?,
    };
    crate::write_measure(&mu, None, a.out.as_deref())
}
