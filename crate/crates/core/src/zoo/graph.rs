//! Graph models: spanning trees, forests, random cluster, exclusion.

use crate::error::{check_rank, Error, Result};
use crate::measure::{BinaryMeasure, FloatMeasure};
use crate::ops::{stir_continuous, truncate, RateSegment};
use crate::weight::{Rational, Weight};

/// Largest edge count for the enumerating constructors.
pub const MAX_GRAPH_EDGES: usize = 16;
pub const MAX_EXCLUSION_VERTICES: usize = 12;

/// Finite multigraph (parallel edges allowed, self-loops not).
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSpec {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    /// Positive per-edge weights `W(e)`.
    pub weights: Option<Vec<Rational>>,
    /// Nonnegative per-edge swap rates for exclusion.
    pub rates: Option<Vec<f64>>,
}

impl GraphSpec {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
        }
        Ok(GraphSpec { vertices, edges, weights: None, rates: None })
    }

    pub fn with_weights(mut self, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::LengthMismatch { expected: self.edges.len(), got: weights.len() });
        }
        if weights.iter().any(|w| w <= &Rational::from_integer(0.into())) {
            return Err(Error::InvalidGraph("edge weights must be positive".into()));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn with_rates(mut self, rates: Vec<f64>) -> Result<Self> {
        if rates.len() != self.edges.len() {
            return Err(Error::LengthMismatch { expected: self.edges.len(), got: rates.len() });
        }
        if rates.iter().any(|r| !(r >= &0.0) || !r.is_finite()) {
            return Err(Error::InvalidGraph("edge rates must be finite and nonnegative".into()));
        }
        self.rates = Some(rates);
        Ok(self)
    }

    pub fn complete(k: usize) -> Self {
        let edges = (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))).collect();
        GraphSpec { vertices: k, edges, weights: None, rates: None }
    }

    pub fn path(k: usize) -> Self {
        GraphSpec { vertices: k, edges: (1..k).map(|v| (v - 1, v)).collect(), weights: None, rates: None }
    }

    pub fn cycle(k: usize) -> Self {
        let mut g = Self::path(k);
        if k > 2 {
            g.edges.push((k - 1, 0));
        }
        g
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn weight<W: Weight>(&self, e: usize) -> W {
        self.weights.as_ref().map_or_else(W::one, |w| W::from_rational(&w[e]))
    }

    fn check_enumerable(&self) -> Result<()> {
        check_rank(self.edges.len(), MAX_GRAPH_EDGES, "edge enumeration")
    }

    pub fn is_connected(&self) -> bool {
        component_count(self, (1u64 << self.edges.len()) - 1) <= 1
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of `(V, η)`, isolated vertices included.
pub fn component_count(g: &GraphSpec, eta: u64) -> usize {
    let mut parent: Vec<usize> = (0..g.vertices).collect();
    let mut count = g.vertices;
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        if eta >> e & 1 == 1 {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
    }
    count
}

fn is_acyclic(g: &GraphSpec, eta: u64) -> bool {
    component_count(g, eta) + eta.count_ones() as usize == g.vertices
}

fn edge_product<W: Weight>(g: &GraphSpec, eta: u64) -> W {
    (0..g.edges.len()).filter(|e| eta >> e & 1 == 1).fold(W::one(), |acc, e| acc.mul(&g.weight(e)))
}

/// Spanning trees weighted by `Π_{e∈T} W(e)` (uniform without weights).
pub fn spanning_tree_measure<W: Weight>(g: &GraphSpec) -> Result<BinaryMeasure<W>> {
    g.check_enumerable()?;
    if g.vertices == 0 || !g.is_connected() {
        return Err(Error::InvalidGraph("graph is not connected".into()));
    }
    let m = g.edges.len();
    let w = (0..1u64 << m)
        .map(|eta| {
            if eta.count_ones() as usize == g.vertices - 1 && is_acyclic(g, eta) {
                edge_product(g, eta)
            } else {
                W::zero()
            }
        })
        .collect();
    BinaryMeasure::from_weights(m, w)
}

/// Uniform (or `W`-weighted) acyclic edge sets, optionally conditioned on
/// the number of edges lying in `band`.
pub fn forest_measure<W: Weight>(g: &GraphSpec, band: Option<(usize, usize)>) -> Result<BinaryMeasure<W>> {
    g.check_enumerable()?;
    let m = g.edges.len();
    let w = (0..1u64 << m).map(|eta| if is_acyclic(g, eta) { edge_product(g, eta) } else { W::zero() }).collect();
    let mu = BinaryMeasure::from_weights(m, w)?;
    match band {
        Some((a, b)) => truncate(&mu, a, b),
        None => Ok(mu),
    }
}

/// `μ(η) ∝ Π_e p(e)^{η(e)} (1−p(e))^{1−η(e)} q^{N(η)}`, with `N` counting
/// isolated vertices. `p` holds one value per edge or a single shared value.
pub fn random_cluster_measure<W: Weight>(g: &GraphSpec, p: &[W], q: &W) -> Result<BinaryMeasure<W>> {
    g.check_enumerable()?;
    let m = g.edges.len();
    let p: Vec<W> = match p.len() {
        1 => vec![p[0].clone(); m],
        l if l == m => p.to_vec(),
        l => return Err(Error::LengthMismatch { expected: m, got: l }),
    };
    for x in &p {
        if x.is_zero() || x.is_negative() || !x.cmp_weak(&W::one()).is_lt() {
            return Err(Error::InvalidArgument(format!("edge parameter {} outside (0,1)", x.render())));
        }
    }
    if q.is_zero() || q.is_negative() {
        return Err(Error::InvalidArgument(format!("cluster weight {} must be positive", q.render())));
    }
    let qpow: Vec<W> = (0..=g.vertices as u32).map(|k| q.pow(k)).collect();
    let w = (0..1u64 << m)
        .map(|eta| {
            let base = p.iter().enumerate().fold(W::one(), |acc, (e, pe)| {
                if eta >> e & 1 == 1 {
                    acc.mul(pe)
                } else {
                    acc.mul(&W::one().sub(pe))
                }
            });
            base.mul(&qpow[component_count(g, eta)])
        })
        .collect();
    BinaryMeasure::from_weights(m, w)
}

/// Law at time `t` of simple exclusion on `g` started from `eta0` (bit `v`
/// = vertex `v` occupied); endpoints of edge `e` swap at rate `rates[e]`
/// (default 1). Variables are the vertices.
pub fn exclusion_measure(g: &GraphSpec, eta0: usize, t: f64) -> Result<FloatMeasure> {
    check_rank(g.vertices, MAX_EXCLUSION_VERTICES, "exclusion")?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("invalid time {t}")));
    }
    if eta0 >> g.vertices != 0 {
        return Err(Error::InvalidConfiguration(format!("initial state {eta0} has bits beyond {} vertices", g.vertices)));
    }
    let start = FloatMeasure::point_mass(g.vertices, eta0)?;
    let rates = g
        .edges
        .iter()
        .enumerate()
        .map(|(e, &uv)| (uv, g.rates.as_ref().map_or(1.0, |r| r[e])))
        .collect();
    stir_continuous(&start, &[RateSegment { duration: t, rates }])
}
