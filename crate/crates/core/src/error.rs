use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid metric: {0}")]
    Metric(String),

    #[error("invalid relation: {0}")]
    Relation(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("diagonal not contained in G^{0}")]
    DiagonalNotContained(usize),

    #[error("map is not a bijection between the point sets: {0}")]
    NotBijective(String),

    /// The legal set is empty, so no infinite trajectory exists.
    #[error("system is flagged: legal set is empty")]
    Flagged,

    #[error("verdicts belong to different systems")]
    MismatchedSystems,

    #[error("malformed lasso: {0}")]
    Lasso(String),

    #[error("set escapes the domain: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
