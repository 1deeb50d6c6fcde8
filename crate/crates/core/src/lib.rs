//! Exact laboratory for negative dependence of binary random variables.
//!
//! Measures live on the Boolean lattice `{0,1}^n`; configuration index
//! `Σ x_j 2^j` stores variable `j` (0-based) in bit `j`.

pub mod error;
pub mod harness;
pub mod io;
pub mod lattice;
pub mod measure;
pub mod ops;
pub mod props;
pub mod seq;
pub mod weight;
pub mod zoo;

pub use error::{Error, Result};
pub use lattice::{box_product, enumerate_upsets, order_relation, Config, EventSet, Order, Relation, UpSet};
pub use measure::{AnyMeasure, BinaryMeasure, FloatMeasure, RationalMeasure};
pub use props::{check_property, PropertyId, PropertyReport, Sign, Verdict, Witness};
pub use seq::{rank_sequence, RankSequence};
pub use weight::{ratio, Backend, Rational, Ring, Weight};
