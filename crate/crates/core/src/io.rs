//! JSON file formats for measures, graphs and reports.
//!
//! Weights are written as strings: `p/q` for rationals and the shortest
//! round-trip decimal for floats. On input, JSON numbers are also accepted
//! and read from their decimal text, so `0.1` is exactly `1/10`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{config_string, Config};
use crate::measure::{AnyMeasure, BinaryMeasure};
use crate::weight::{parse_rational, Backend, Rational, Weight};
use crate::with_measure;
use crate::zoo::GraphSpec;

pub const FORMAT_VERSION: u32 = 1;

fn default_version() -> u32 {
    FORMAT_VERSION
}

/// A number kept as its decimal or `p/q` text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num(pub String);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(Num(s)),
            serde_json::Value::Number(n) => Ok(Num(n.to_string())),
            other => Err(serde::de::Error::custom(format!("expected a number, got {other}"))),
        }
    }
}

impl Num {
    fn parse<W: Weight>(&self) -> Result<W> {
        W::parse(&self.0).ok_or_else(|| Error::Parse(format!("invalid number `{}`", self.0)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    #[serde(default = "default_version")]
    pub version: u32,
    pub n: usize,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Dense weights by configuration index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<Num>>,
    /// Sparse `[configuration string, weight]` pairs; strings list `X1..Xn`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<(String, Num)>>,
}

fn default_backend() -> Backend {
    Backend::Rational
}

/// A loaded measure plus any warnings raised while reading it.
#[derive(Clone, Debug, PartialEq)]
pub struct Loaded {
    pub measure: AnyMeasure,
    pub labels: Option<Vec<String>>,
    pub warnings: Vec<String>,
}

impl MeasureFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: MeasureFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if f.version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported version {}", f.version)));
        }
        Ok(f)
    }

    /// Builds the measure in the file's backend, or in `backend` if given.
    /// Weights not summing to one are normalized with a warning.
    pub fn load(&self, backend: Option<Backend>) -> Result<Loaded> {
        let backend = backend.unwrap_or(self.backend);
        let mut warnings = Vec::new();
        let measure = match backend {
            Backend::Rational => AnyMeasure::Rational(self.build(&mut warnings)?),
            Backend::Float => AnyMeasure::Float(self.build(&mut warnings)?),
        };
        if let Some(l) = &self.labels {
            if l.len() != self.n {
                return Err(Error::LengthMismatch { expected: self.n, got: l.len() });
            }
        }
        Ok(Loaded { measure, labels: self.labels.clone(), warnings })
    }

    fn build<W: Weight>(&self, warnings: &mut Vec<String>) -> Result<BinaryMeasure<W>> {
        crate::error::check_rank(self.n, crate::measure::MAX_MEASURE_RANK, "measures")?;
        let weights: Vec<W> = match (&self.probs, &self.atoms) {
            (Some(p), None) => {
                if p.len() != 1 << self.n {
                    return Err(Error::LengthMismatch { expected: 1 << self.n, got: p.len() });
                }
                p.iter().map(Num::parse).collect::<Result<_>>()?
            }
            (None, Some(a)) => {
                let mut w = vec![W::zero(); 1 << self.n];
                for (s, x) in a {
                    let c: Config = s.parse()?;
                    if c.n() != self.n {
                        return Err(Error::InvalidConfiguration(format!("`{s}` does not have {} variables", self.n)));
                    }
                    w[c.index()] = w[c.index()].add(&x.parse()?);
                }
                w
            }
            _ => return Err(Error::Parse("exactly one of `probs` and `atoms` must be present".into())),
        };
        let total = weights.iter().fold(W::zero(), |s, x| s.add(x));
        let exact = match W::BACKEND {
            Backend::Rational => total == W::one(),
            Backend::Float => (total.to_f64() - 1.0).abs() <= crate::weight::FLOAT_MASS_TOLERANCE,
        };
        if !exact && !weights.iter().any(|w| w.is_negative()) && !total.is_zero() {
            warnings.push(format!("weights sum to {}; normalized", total.render()));
        }
        BinaryMeasure::from_weights(self.n, weights)
    }

    /// Canonical file for a measure: sparse when some atom is zero, dense
    /// otherwise.
    pub fn from_measure(mu: &AnyMeasure, labels: Option<Vec<String>>) -> Self {
        let n = mu.n();
        let rendered = mu.rendered();
        let zero = |i: usize| with_measure!(mu, m => m.prob(i).is_zero());
        let sparse = (0..1usize << n).any(zero);
        let (probs, atoms) = if sparse {
            let atoms = (0..1usize << n)
                .filter(|&i| !zero(i))
                .map(|i| (config_string(n, i), Num(rendered[i].clone())))
                .collect();
            (None, Some(atoms))
        } else {
            (Some(rendered.into_iter().map(Num).collect()), None)
        };
        MeasureFile { version: FORMAT_VERSION, n, backend: mu.backend(), labels, probs, atoms }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("measure files serialize") + "\n"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(default = "default_version")]
    pub version: u32,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<Vec<f64>>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_graph(&self) -> Result<GraphSpec> {
        let mut g = GraphSpec::new(self.vertices, self.edges.clone())?;
        if let Some(w) = &self.weights {
            let w = w
                .iter()
                .map(|x| parse_rational(&x.0).ok_or_else(|| Error::Parse(format!("invalid weight `{}`", x.0))))
                .collect::<Result<Vec<Rational>>>()?;
            g = g.with_weights(w)?;
        }
        if let Some(r) = &self.rates {
            g = g.with_rates(r.clone())?;
        }
        Ok(g)
    }

    pub fn from_graph(g: &GraphSpec) -> Self {
        GraphFile {
            version: FORMAT_VERSION,
            vertices: g.vertices,
            edges: g.edges.clone(),
            weights: g.weights.as_ref().map(|w| w.iter().map(|x| Num(x.render())).collect()),
            rates: g.rates.clone(),
        }
    }
}

/// One line of line-delimited output: `{"version":1,"type":kind,...}`
/// followed by the fields of `value`.
pub fn record<T: Serialize>(kind: &str, value: &T) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("version".into(), FORMAT_VERSION.into());
    obj.insert("type".into(), kind.into());
    match serde_json::to_value(value).expect("reports serialize") {
        serde_json::Value::Object(m) => {
            for (k, v) in m {
                obj.entry(k).or_insert(v);
            }
        }
        other => {
            obj.insert("value".into(), other);
        }
    }
    serde_json::Value::Object(obj).to_string()
}
