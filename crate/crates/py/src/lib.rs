//! Python bindings: `import negdep`.
//!
//! Numbers cross the boundary as anything whose `str()` is an integer, a
//! decimal or `p/q` (so `int`, `str` and `fractions.Fraction` are exact);
//! floats go through `repr`. Reports come back as plain dicts.

use negdep::harness::{self, ConjectureId, ConjectureSpec, ExampleId, SearchOptions};
use negdep::io::MeasureFile;
use negdep::ops::{self, ExternalField, FieldValue, LogConcaveWeights};
use negdep::props::{self, DominanceMode, PlusOptions, PropertyId};
use negdep::zoo::{self, GraphSpec};
use negdep::{with_measure, AnyMeasure, Backend, BinaryMeasure, Config, Rational, Weight};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyFloat;
use serde::Serialize;

create_exception!(negdep, NegdepError, PyValueError);

fn err(e: negdep::Error) -> PyErr {
    NegdepError::new_err(e.to_string())
}

fn bad(msg: impl Into<String>) -> PyErr {
    NegdepError::new_err(msg.into())
}

fn text_of(x: &Bound<'_, PyAny>) -> PyResult<String> {
    if x.is_instance_of::<PyFloat>() {
        Ok(x.repr()?.to_string())
    } else {
        Ok(x.str()?.to_string())
    }
}

fn num<W: Weight>(x: &Bound<'_, PyAny>) -> PyResult<W> {
    let s = text_of(x)?;
    W::parse(&s).ok_or_else(|| bad(format!("invalid number `{s}`")))
}

fn nums<W: Weight>(xs: &[Bound<'_, PyAny>]) -> PyResult<Vec<W>> {
    xs.iter().map(num).collect()
}

fn backend(s: &str) -> PyResult<Backend> {
    s.parse().map_err(bad)
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| bad(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A probability measure on `{0,1}^n`; bit `j` of an atom index is `X_{j+1}`.
#[pyclass(module = "negdep", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Measure {
    inner: AnyMeasure,
}

impl Measure {
    fn wrap(m: impl Into<AnyMeasure>) -> Self {
        Measure { inner: m.into() }
    }

    fn map<F, G>(&self, rat: F, flt: G) -> PyResult<Measure>
    where
        F: FnOnce(&BinaryMeasure<Rational>) -> negdep::Result<BinaryMeasure<Rational>>,
        G: FnOnce(&BinaryMeasure<f64>) -> negdep::Result<BinaryMeasure<f64>>,
    {
        match &self.inner {
            AnyMeasure::Rational(m) => rat(m).map(Measure::wrap),
            AnyMeasure::Float(m) => flt(m).map(Measure::wrap),
        }
        .map_err(err)
    }
}

fn field_entries<W: Weight>(entries: &[Bound<'_, PyAny>]) -> PyResult<ExternalField<W>> {
    let v = entries
        .iter()
        .map(|e| {
            let s = text_of(e)?;
            if s == "inf" {
                return Ok(FieldValue::Infinite);
            }
            let w: W = num(e)?;
            Ok(if w.is_zero() { FieldValue::Zero } else { FieldValue::Finite(w) })
        })
        .collect::<PyResult<Vec<_>>>()?;
    ExternalField::new(v).map_err(err)
}

#[pymethods]
impl Measure {
    /// Measure from weights in index order; normalized if they do not sum to 1.
    #[new]
    #[pyo3(signature = (weights, backend = "rational"))]
    fn new(weights: Vec<Bound<'_, PyAny>>, backend: &str) -> PyResult<Self> {
        let len = weights.len();
        if !len.is_power_of_two() {
            return Err(bad(format!("{len} weights is not a power of two")));
        }
        let n = len.trailing_zeros() as usize;
        match self::backend(backend)? {
            Backend::Rational => BinaryMeasure::from_weights(n, nums::<Rational>(&weights)?).map(Measure::wrap),
            Backend::Float => BinaryMeasure::from_weights(n, nums::<f64>(&weights)?).map(Measure::wrap),
        }
        .map_err(err)
    }

    /// Measure from `{config string: weight}`; strings list `X1..Xn`.
    #[staticmethod]
    #[pyo3(signature = (n, atoms, backend = "rational"))]
    fn from_atoms(n: usize, atoms: Vec<(String, Bound<'_, PyAny>)>, backend: &str) -> PyResult<Self> {
        fn build<W: Weight>(n: usize, atoms: &[(String, Bound<'_, PyAny>)]) -> PyResult<BinaryMeasure<W>> {
            let mut v = Vec::new();
            for (s, w) in atoms {
                let c: Config = s.parse().map_err(err)?;
                if c.n() != n {
                    return Err(bad(format!("`{s}` does not have {n} variables")));
                }
                v.push((c.index(), num::<W>(w)?));
            }
            BinaryMeasure::from_sparse(n, v).map_err(err)
        }
        Ok(match self::backend(backend)? {
            Backend::Rational => Measure::wrap(build::<Rational>(n, &atoms)?),
            Backend::Float => Measure::wrap(build::<f64>(n, &atoms)?),
        })
    }

    /// Reads the JSON measure-file format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let f = MeasureFile::parse(text).map_err(err)?;
        Ok(Measure { inner: f.load(None).map_err(err)?.measure })
    }

    fn to_json(&self) -> String {
        MeasureFile::from_measure(&self.inner, None).to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn backend(&self) -> String {
        self.inner.backend().to_string()
    }

    /// Atom probabilities as strings (`p/q`, or shortest float form).
    fn probs(&self) -> Vec<String> {
        self.inner.rendered()
    }

    /// `P(X_j = 1)` for 0-based `j`.
    fn marginal(&self, j: usize) -> PyResult<String> {
        if j >= self.inner.n() {
            return Err(bad(format!("variable {j} out of range")));
        }
        Ok(with_measure!(&self.inner, m => m.marginal(j).render()))
    }

    fn covariance(&self, e: usize, f: usize) -> PyResult<String> {
        if e >= self.inner.n() || f >= self.inner.n() {
            return Err(bad("variable out of range"));
        }
        Ok(with_measure!(&self.inner, m => m.covariance(e, f).render()))
    }

    fn rank_sequence(&self) -> Vec<String> {
        with_measure!(&self.inner, m => m.rank_weights().iter().map(|x| x.render()).collect())
    }

    fn to_float(&self) -> Measure {
        Measure::wrap(self.inner.to_float())
    }

    fn project(&self, keep: Vec<usize>) -> PyResult<Measure> {
        self.map(|m| ops::project(m, &keep), |m| ops::project(m, &keep))
    }

    /// Conditions on `{variable: 0 or 1}`; `drop` removes the fixed variables.
    #[pyo3(signature = (assignment, drop = false))]
    fn condition(&self, assignment: Vec<(usize, bool)>, drop: bool) -> PyResult<Measure> {
        if drop {
            self.map(|m| ops::condition_projected(m, &assignment), |m| ops::condition_projected(m, &assignment))
        } else {
            self.map(|m| ops::condition(m, &assignment), |m| ops::condition(m, &assignment))
        }
    }

    /// External field, one entry per variable: positive number, 0 or "inf".
    fn field(&self, entries: Vec<Bound<'_, PyAny>>) -> PyResult<Measure> {
        match &self.inner {
            AnyMeasure::Rational(m) => ops::apply_field(m, &field_entries(&entries)?).map(Measure::wrap),
            AnyMeasure::Float(m) => ops::apply_field(m, &field_entries(&entries)?).map(Measure::wrap),
        }
        .map_err(err)
    }

    fn truncate(&self, a: usize, b: usize) -> PyResult<Measure> {
        self.map(|m| ops::truncate(m, a, b), |m| ops::truncate(m, a, b))
    }

    fn rank_rescale(&self, q: Vec<Bound<'_, PyAny>>) -> PyResult<Measure> {
        match &self.inner {
            AnyMeasure::Rational(m) => {
                LogConcaveWeights::new(nums(&q)?).and_then(|q| ops::rank_rescale(m, &q)).map(Measure::wrap)
            }
            AnyMeasure::Float(m) => {
                LogConcaveWeights::new(nums(&q)?).and_then(|q| ops::rank_rescale(m, &q)).map(Measure::wrap)
            }
        }
        .map_err(err)
    }

    fn symmetrize(&self) -> PyResult<Measure> {
        self.map(|m| Ok(ops::symmetrize(m)), |m| Ok(ops::symmetrize(m)))
    }

    fn relabel(&self, pi: Vec<usize>) -> PyResult<Measure> {
        self.map(|m| ops::relabel(m, &pi), |m| ops::relabel(m, &pi))
    }

    /// Discrete stirring: `[((i, j), eps), ...]` applied left to right.
    fn stir(&self, schedule: Vec<((usize, usize), Bound<'_, PyAny>)>) -> PyResult<Measure> {
        match &self.inner {
            AnyMeasure::Rational(m) => {
                let s = schedule.iter().map(|(p, e)| Ok((*p, num(e)?))).collect::<PyResult<Vec<_>>>()?;
                ops::stir(m, &s).map(Measure::wrap)
            }
            AnyMeasure::Float(m) => {
                let s = schedule.iter().map(|(p, e)| Ok((*p, num(e)?))).collect::<PyResult<Vec<_>>>()?;
                ops::stir(m, &s).map(Measure::wrap)
            }
        }
        .map_err(err)
    }

    /// Independent product; this measure's variables come first.
    fn product(&self, other: &Measure) -> PyResult<Measure> {
        match (&self.inner, &other.inner) {
            (AnyMeasure::Rational(a), AnyMeasure::Rational(b)) => ops::product(a, b).map(Measure::wrap),
            (AnyMeasure::Float(a), AnyMeasure::Float(b)) => ops::product(a, b).map(Measure::wrap),
            _ => Err(negdep::Error::BackendMismatch),
        }
        .map_err(err)
    }

    /// Decides a property by id (see `properties()`); `plus` checks the
    /// field-closed form with `samples` random fields.
    #[pyo3(signature = (property, plus = false, samples = 100, seed = 0))]
    fn check<'py>(
        &self,
        py: Python<'py>,
        property: &str,
        plus: bool,
        samples: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let id: PropertyId = property.parse().map_err(err)?;
        let r = if plus {
            let base = id.plus_base().ok_or_else(|| bad(format!("`{property}` has no \"+\" form")))?;
            let opts = PlusOptions { samples, seed };
            with_measure!(&self.inner, m => props::check_plus(m, base, &opts))
        } else {
            with_measure!(&self.inner, m => negdep::check_property(m, id))
        }
        .map_err(err)?;
        to_py(py, &r)
    }

    /// Whether this measure stochastically dominates `other`.
    #[pyo3(signature = (other, mode = "auto"))]
    fn dominates<'py>(&self, py: Python<'py>, other: &Measure, mode: &str) -> PyResult<Bound<'py, PyAny>> {
        let mode: DominanceMode = mode.parse().map_err(err)?;
        let r = match (&self.inner, &other.inner) {
            (AnyMeasure::Rational(a), AnyMeasure::Rational(b)) => props::stochastic_dominates(a, b, mode),
            (AnyMeasure::Float(a), AnyMeasure::Float(b)) => props::stochastic_dominates(a, b, mode),
            _ => Err(negdep::Error::BackendMismatch),
        }
        .map_err(err)?;
        to_py(py, &r)
    }

    /// Whether some coupling puts this measure's sample equal to or one
    /// step above `other`'s.
    fn covers<'py>(&self, py: Python<'py>, other: &Measure) -> PyResult<Bound<'py, PyAny>> {
        let r = match (&self.inner, &other.inner) {
            (AnyMeasure::Rational(a), AnyMeasure::Rational(b)) => props::stochastic_covers(a, b),
            (AnyMeasure::Float(a), AnyMeasure::Float(b)) => props::stochastic_covers(a, b),
            _ => Err(negdep::Error::BackendMismatch),
        }
        .map_err(err)?;
        to_py(py, &r)
    }

    fn __len__(&self) -> usize {
        1 << self.inner.n()
    }

    fn __eq__(&self, other: &Measure) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Measure(n={}, backend={}, probs=[{}])", self.inner.n(), self.inner.backend(), self.inner.rendered().join(", "))
    }
}

fn graph(vertices: usize, edges: Vec<(usize, usize)>, weights: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<GraphSpec> {
    let g = GraphSpec::new(vertices, edges).map_err(err)?;
    match weights {
        Some(w) => g.with_weights(nums(&w)?).map_err(err),
        None => Ok(g),
    }
}

/// Uniform (or weighted) spanning tree; variables are the edges.
#[pyfunction]
#[pyo3(signature = (vertices, edges, weights = None))]
fn spanning_tree(vertices: usize, edges: Vec<(usize, usize)>, weights: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<Measure> {
    zoo::spanning_tree_measure::<Rational>(&graph(vertices, edges, weights)?).map(Measure::wrap).map_err(err)
}

/// Uniform (or weighted) forest, optionally restricted to an edge-count band.
#[pyfunction]
#[pyo3(signature = (vertices, edges, weights = None, band = None))]
fn forest(
    vertices: usize,
    edges: Vec<(usize, usize)>,
    weights: Option<Vec<Bound<'_, PyAny>>>,
    band: Option<(usize, usize)>,
) -> PyResult<Measure> {
    zoo::forest_measure::<Rational>(&graph(vertices, edges, weights)?, band).map(Measure::wrap).map_err(err)
}

/// Random-cluster measure; `p` is one value or one per edge.
#[pyfunction]
fn random_cluster(
    vertices: usize,
    edges: Vec<(usize, usize)>,
    p: Vec<Bound<'_, PyAny>>,
    q: Bound<'_, PyAny>,
) -> PyResult<Measure> {
    let g = graph(vertices, edges, None)?;
    zoo::random_cluster_measure::<Rational>(&g, &nums(&p)?, &num(&q)?).map(Measure::wrap).map_err(err)
}

/// Simple exclusion at time `t` from the 0/1 string `eta0` over the vertices.
#[pyfunction]
#[pyo3(signature = (vertices, edges, eta0, t, rates = None))]
fn exclusion(vertices: usize, edges: Vec<(usize, usize)>, eta0: &str, t: f64, rates: Option<Vec<f64>>) -> PyResult<Measure> {
    let mut g = graph(vertices, edges, None)?;
    if let Some(r) = rates {
        g = g.with_rates(r).map_err(err)?;
    }
    let c: Config = eta0.parse().map_err(err)?;
    if c.n() != vertices {
        return Err(bad(format!("eta0 must have {vertices} entries")));
    }
    zoo::exclusion_measure(&g, c.index(), t).map(Measure::wrap).map_err(err)
}

/// Occupancy of urns after `k` independent drops with probabilities `p`.
#[pyfunction]
fn urns(k: u32, p: Vec<Bound<'_, PyAny>>) -> PyResult<Measure> {
    let p: Vec<Rational> = nums(&p)?;
    zoo::urn_measure(p.len(), k, &p).map(Measure::wrap).map_err(err)
}

/// Exchangeable measure with rank sequence `a_0..a_n`.
#[pyfunction]
fn exchangeable(ranks: Vec<Bound<'_, PyAny>>) -> PyResult<Measure> {
    zoo::exchangeable_measure::<Rational>(&nums(&ranks)?).map(Measure::wrap).map_err(err)
}

#[pyfunction]
fn example1(eps: Bound<'_, PyAny>) -> PyResult<Measure> {
    zoo::example1(&num(&eps)?).map(Measure::wrap).map_err(err)
}

#[pyfunction]
fn example2(eps: Bound<'_, PyAny>) -> PyResult<Measure> {
    zoo::example2(&num(&eps)?).map(Measure::wrap).map_err(err)
}

#[pyfunction]
fn five_point() -> Measure {
    Measure::wrap(zoo::five_point())
}

#[pyfunction]
fn properties() -> Vec<&'static str> {
    PropertyId::ALL.iter().map(|p| p.name()).collect()
}

#[pyfunction]
fn conjectures() -> Vec<&'static str> {
    ConjectureId::ALL.iter().map(|c| c.name()).collect()
}

/// Seeded counterexample search; returns the search report.
#[pyfunction]
#[pyo3(signature = (conjecture, n = 4, budget = 10_000, seed = 1, inner_samples = 20, strengthen = false))]
fn search<'py>(
    py: Python<'py>,
    conjecture: &str,
    n: usize,
    budget: u64,
    seed: u64,
    inner_samples: usize,
    strengthen: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let id: ConjectureId = conjecture.parse().map_err(err)?;
    let spec = if strengthen { ConjectureSpec::strengthened(id) } else { ConjectureSpec::new(id) };
    let mut opts = SearchOptions::new(n, budget, seed);
    opts.inner_samples = inner_samples;
    let r = py.detach(|| harness::search(&spec, &opts)).map_err(err)?;
    to_py(py, &r)
}

/// Reproduces one worked example (`ex1`, `ex2`, `stoch-table`,
/// `s33-five-point`, `figure1-demo`).
#[pyfunction]
fn reproduce<'py>(py: Python<'py>, example: &str) -> PyResult<Bound<'py, PyAny>> {
    let id: ExampleId = example.parse().map_err(err)?;
    to_py(py, &harness::reproduce_example(id).map_err(err)?)
}

/// NA, CNA, JNRD, h-NLC and their "+" forms, with consistency flags.
#[pyfunction]
#[pyo3(signature = (measure, samples = 100, seed = 0))]
fn figure1<'py>(py: Python<'py>, measure: &Measure, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let opts = PlusOptions { samples, seed };
    let t = with_measure!(&measure.inner, m => harness::verify_figure1(m, &opts)).map_err(err)?;
    to_py(py, &t)
}

#[pymodule(name = "negdep")]
fn negdep_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NegdepError", m.py().get_type::<NegdepError>())?;
    m.add_class::<Measure>()?;
    m.add_function(wrap_pyfunction!(spanning_tree, m)?)?;
    m.add_function(wrap_pyfunction!(forest, m)?)?;
    m.add_function(wrap_pyfunction!(random_cluster, m)?)?;
    m.add_function(wrap_pyfunction!(exclusion, m)?)?;
    m.add_function(wrap_pyfunction!(urns, m)?)?;
    m.add_function(wrap_pyfunction!(exchangeable, m)?)?;
    m.add_function(wrap_pyfunction!(example1, m)?)?;
    m.add_function(wrap_pyfunction!(example2, m)?)?;
    m.add_function(wrap_pyfunction!(five_point, m)?)?;
    m.add_function(wrap_pyfunction!(properties, m)?)?;
    m.add_function(wrap_pyfunction!(conjectures, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add_function(wrap_pyfunction!(figure1, m)?)?;
    Ok(())
}
