//! `negdep` command-line interface.
//!
//! Exit status: 0 holds / pass / none found, 1 fails / counterexample
//! found, 2 inconclusive, 64 malformed input file, 65 size limit exceeded,
//! 66 invalid arguments, 74 I/O error.

mod error;
mod models;
mod transform;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use negdep::harness::{
    reproduce_example, search, verify_figure1, ConjectureId, ConjectureSpec, ExampleId, SearchOptions,
};
use negdep::io::{record, MeasureFile};
use negdep::props::{
    check_plus, stochastic_covers, stochastic_dominates, DominanceMode, PlusOptions, PropertyId, PropertyReport,
    Verdict,
};
use negdep::{with_measure, AnyMeasure, Backend};

use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "negdep", version, about = "Exact checks of negative dependence on small Boolean lattices")]
struct Cli {
    /// Worker threads (default: NEGDEP_WORKERS, else all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a dependence property of a measure file.
    Check(CheckArgs),
    /// Build a measure from one of the models.
    Build(models::BuildArgs),
    /// Apply a closure operation to a measure file.
    Transform(transform::TransformArgs),
    /// Seeded counterexample search for a conjecture.
    Search(SearchArgs),
    /// Reproduce the worked examples.
    Repro(ReproArgs),
    /// NA, CNA, JNRD, h-NLC and their "+" forms, with a consistency check.
    Figure1(Figure1Args),
}

#[derive(Args, Debug)]
struct Output {
    /// Write the structured record(s) to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print structured records instead of the human-readable form.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Property id (nc, nlc, plc, hnlc, hplc, na, pa, pa-disjoint, cna, jnrd,
    /// bkrna, bkrna-upsets, ulc, edge-correlation, rank-monotone, rank-cover),
    /// or `dominates` / `covers` together with --against.
    #[arg(long)]
    property: String,
    /// Check the field-closed "+" form (nc, hnlc, jnrd, cna, ulc).
    #[arg(long)]
    plus: bool,
    /// Random fields for --plus.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dominance algorithm: auto, enumerate or flow.
    #[arg(long, default_value = "auto")]
    mode: String,
    /// Arithmetic: rational or float (default: the file's).
    #[arg(long)]
    backend: Option<String>,
    /// Second measure for `dominates` and `covers`.
    #[arg(long)]
    against: Option<PathBuf>,
    input: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    conjecture: String,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random fields per "+" check on each candidate.
    #[arg(long, default_value_t = 20)]
    inner_samples: usize,
    /// Use the "+" hypothesis where the default is the plain one (rank-cover).
    #[arg(long)]
    strengthen: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ReproArgs {
    /// ex1, ex2, stoch-table, s33-five-point or figure1-demo.
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    example: Option<String>,
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct Figure1Args {
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    backend: Option<String>,
    input: PathBuf,
    #[command(flatten)]
    output: Output,
}

pub(crate) fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

pub(crate) fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn parse_backend(s: &Option<String>) -> CliResult<Option<Backend>> {
    s.as_deref().map(|b| b.parse::<Backend>().map_err(CliError::usage)).transpose()
}

/// Loads a measure file, printing loader warnings to stderr.
pub(crate) fn load_measure(path: &Path, backend: Option<Backend>) -> CliResult<AnyMeasure> {
    let text = read_file(path)?;
    let file = MeasureFile::parse(&text).map_err(CliError::input)?;
    let loaded = file.load(backend).map_err(CliError::input)?;
    for w in &loaded.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(loaded.measure)
}

/// Prints records (or their human forms) and writes them to `--out`.
fn emit(output: &Output, records: &[String], human: &[String]) -> CliResult<()> {
    let lines = if output.json { records } else { human };
    for l in lines {
        print_line(l);
    }
    if let Some(path) = &output.out {
        let mut text = records.join("\n");
        text.push('\n');
        write_file(path, &text)?;
    }
    Ok(())
}

/// `println!` that ends the process quietly when stdout is closed.
fn print_line(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{s}").and_then(|()| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: stdout: {e}");
        std::process::exit(error::IO.into());
    }
}

fn human_report(r: &PropertyReport) -> String {
    let mut s = format!("{}: {}", r.property, r.verdict);
    if let Some(b) = r.budget_used {
        s.push_str(&format!(" (budget {b})"));
    }
    if let Some(n) = &r.note {
        s.push_str(&format!(" [{n}]"));
    }
    if let Some(w) = &r.witness {
        s.push_str(&format!("\n  witness: {}", serde_json::to_string(w).expect("witness serializes")));
    }
    s
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => 0,
        Verdict::Fails => 1,
        Verdict::Inconclusive => 2,
    }
}

fn cmd_check(a: &CheckArgs) -> CliResult<u8> {
    let backend = parse_backend(&a.backend)?;
    let mu = load_measure(&a.input, backend)?;
    let report = match a.property.as_str() {
        "dominates" | "covers" => {
            let path = a.against.as_ref().ok_or_else(|| CliError::usage("--against is required"))?;
            let nu = load_measure(path, Some(mu.backend()))?;
            let mode: DominanceMode = a.mode.parse().map_err(CliError::usage)?;
            let pairwise = a.property == "covers";
            match (&mu, &nu) {
                (AnyMeasure::Rational(m), AnyMeasure::Rational(v)) if pairwise => stochastic_covers(m, v),
                (AnyMeasure::Rational(m), AnyMeasure::Rational(v)) => stochastic_dominates(m, v, mode),
                (AnyMeasure::Float(m), AnyMeasure::Float(v)) if pairwise => stochastic_covers(m, v),
                (AnyMeasure::Float(m), AnyMeasure::Float(v)) => stochastic_dominates(m, v, mode),
                _ => unreachable!("both measures loaded in one backend"),
            }
            .map_err(CliError::op)?
        }
        p => {
            let id: PropertyId = p.parse().map_err(CliError::usage)?;
            if a.plus {
                let base = id.plus_base().ok_or_else(|| CliError::usage(format!("`{p}` has no \"+\" form")))?;
                let opts = PlusOptions { samples: a.samples, seed: a.seed };
                with_measure!(&mu, m => check_plus(m, base, &opts)).map_err(CliError::op)?
            } else {
                with_measure!(&mu, m => negdep::check_property(m, id)).map_err(CliError::op)?
            }
        }
    };
    emit(&a.output, &[record("property", &report)], &[human_report(&report)])?;
    Ok(verdict_code(report.verdict))
}

fn cmd_search(a: &SearchArgs) -> CliResult<u8> {
    let id: ConjectureId = a.conjecture.parse().map_err(CliError::usage)?;
    let spec = if a.strengthen { ConjectureSpec::strengthened(id) } else { ConjectureSpec::new(id) };
    let mut opts = SearchOptions::new(a.n, a.budget, a.seed);
    opts.inner_samples = a.inner_samples;
    let r = search(&spec, &opts).map_err(CliError::op)?;
    let mut human = format!(
        "{}: {} (tested {}, hypothesis failed {}, unconfirmed {}, {} ms)",
        id, r.status(), r.tested, r.skipped, r.unconfirmed, r.elapsed_ms
    );
    if let Some(c) = &r.counterexample {
        human.push_str(&format!(
            "\n  candidate {} ({}): {}\n  {}",
            c.index,
            c.source,
            c.probs.join(" "),
            human_report(&c.conclusion)
        ));
    }
    emit(&a.output, &[record("search", &r)], &[human])?;
    Ok(u8::from(r.found()))
}

fn cmd_repro(a: &ReproArgs) -> CliResult<u8> {
    let ids: Vec<ExampleId> = match &a.example {
        Some(e) => vec![e.parse().map_err(CliError::usage)?],
        None => ExampleId::ALL.to_vec(),
    };
    let (mut records, mut human, mut ok) = (Vec::new(), Vec::new(), true);
    for id in ids {
        let r = reproduce_example(id).map_err(CliError::op)?;
        ok &= r.pass;
        let mut h = format!("{}: {}", id.name(), if r.pass { "pass" } else { "FAIL" });
        for c in &r.checks {
            h.push_str(&format!("\n  [{}] {} ({})", if c.pass { "ok" } else { "FAIL" }, c.claim, c.detail));
        }
        for n in &r.notes {
            h.push_str(&format!("\n  note: {n}"));
        }
        records.push(record("repro", &r));
        human.push(h);
    }
    emit(&a.output, &records, &human)?;
    Ok(u8::from(!ok))
}

fn cmd_figure1(a: &Figure1Args) -> CliResult<u8> {
    let mu = load_measure(&a.input, parse_backend(&a.backend)?)?;
    let opts = PlusOptions { samples: a.samples, seed: a.seed };
    let t = with_measure!(&mu, m => verify_figure1(m, &opts)).map_err(CliError::op)?;
    let mut h = t.summary();
    for v in &t.violations {
        h.push_str(&format!("\n  inconsistent: {v}"));
    }
    emit(&a.output, &[record("figure1", &t)], &[h])?;
    Ok(if t.consistent { 0 } else { 1 })
}

fn workers(cli: Option<usize>) -> CliResult<Option<usize>> {
    if cli.is_some() {
        return Ok(cli);
    }
    match std::env::var("NEGDEP_WORKERS") {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| CliError::usage(format!("NEGDEP_WORKERS=`{s}` is not a count"))),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    if let Some(k) = workers(cli.workers)? {
        if k == 0 {
            return Err(CliError::usage("--workers must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global().map_err(|e| CliError::usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Build(a) => models::cmd_build(a).map(|()| 0),
        Command::Transform(a) => transform::cmd_transform(a).map(|()| 0),
        Command::Search(a) => cmd_search(a),
        Command::Repro(a) => cmd_repro(a),
        Command::Figure1(a) => cmd_figure1(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { error::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

/// Writes a measure file to `out`, or to stdout.
pub(crate) fn write_measure(mu: &AnyMeasure, labels: Option<Vec<String>>, out: Option<&Path>) -> CliResult<()> {
    let text = MeasureFile::from_measure(mu, labels).to_json();
    match out {
        Some(p) => write_file(p, &format!("{text}\n")),
        None => {
            print_line(&text);
            Ok(())
        }
    }
}
