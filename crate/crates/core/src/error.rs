use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The input does not describe a metric measure space.
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quasi-norm specification is malformed or unsupported.
    #[error("invalid r.i. space spec: {0}")]
    InvalidSpec(String),

    /// Numerical evaluation of a quasi-norm did not converge.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// The linear program could not be solved or certified. `dump` holds
    /// the instance in plain-text LP format.
    #[error("LP solver error: {message}")]
    Solver { message: String, dump: String },

    /// A theorem check was requested outside its hypotheses.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The closed-form analysis of a weight does not cover this shape.
    #[error("symbolic analysis error: {0}")]
    Symbolic(String),

    /// Both sides of a report were inconsistent (rhs = 0 with lhs > 0).
    #[error("inconsistent report: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
