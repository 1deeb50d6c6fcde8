use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice rank {n} exceeds the limit {max} for {what}")]
    RankOutOfRange { n: usize, max: usize, what: &'static str },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("backend mismatch")]
    BackendMismatch,
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("conditioning event has zero probability")]
    ZeroMass,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("sequence is not log-concave (first violation at index {0})")]
    NotLogConcave(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown identifier `{0}`")]
    Unknown(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_rank(n: usize, max: usize, what: &'static str) -> Result<()> {
    if n > max {
        Err(Error::RankOutOfRange { n, max, what })
    } else {
        Ok(())
    }
}
