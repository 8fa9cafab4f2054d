use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("form degree error: {0}")]
    Degree(String),

    #[error("invalid algebra specification: {0}")]
    InvalidAlgebra(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-finite integrand value at node {node:?}")]
    NonFinite { node: Vec<f64> },

    #[error("chart violation: {0}")]
    Chart(String),

    #[error("no global logarithm at {location:?}: rotation angle {angle}")]
    NoLogarithm { location: Vec<f64>, angle: f64 },

    #[error("dimension bound exceeded: {0}")]
    DimensionBound(String),

    #[error("safe window violated: {0}")]
    SafeWindow(String),

    #[error("singular intertwining system at mode {mode}: {message}")]
    SingularIntertwiner { mode: usize, message: String },

    #[error("invalid extension instance: {0}")]
    Instance(String),

    #[error("lift inconsistency at pair ({0}, {1}): {2}")]
    LiftInconsistent(usize, usize, String),

    #[error("transition triple ({0}, {1}, {2}) is not scalar (defect {3:.3e})")]
    NotScalar(usize, usize, usize, f64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
