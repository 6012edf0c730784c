use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("model parameters differ: ({0}) vs ({1})")]
    ParamsMismatch(String, String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("degree shell holds {count} kets, above the capacity bound {bound}")]
    Capacity { count: u128, bound: usize },

    #[error("state mixes degrees {0} and {1}")]
    MixedDegree(usize, usize),

    #[error("operation needs a nonzero state")]
    ZeroState,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("{op} requires {parity} p, got p = {p}")]
    Parity { op: &'static str, parity: &'static str, p: usize },

    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("no lowest-weight vector: {0}")]
    Nonexistence(String),

    #[error("construction produced the zero vector: {0}")]
    ZeroVector(String),

    #[error("weight is not dominant: {0}")]
    NonDominant(String),

    #[error("vector is not an eigenvector: {0}")]
    NotEigenvector(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
