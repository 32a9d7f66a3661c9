use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input that cannot represent a point set or parameter (NaN, infinity, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A parameter outside the domain of a numeric primitive.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The hypotheses of a bound do not hold for the given parameters.
    #[error("{bound} bound is inapplicable: {reason}")]
    Inapplicable { bound: &'static str, reason: String },

    #[error("minimum gap is undefined for fewer than two points")]
    UndefinedGap,

    #[error("enumeration budget exceeded: {needed} subsets requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("no admissible configuration found: {0}")]
    EmptyFeasible(String),

    /// A numeric invariant that holds mathematically was violated.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn inapplicable<T>(bound: &'static str, reason: impl Into<String>) -> Result<T> {
    Err(Error::Inapplicable {
        bound,
        reason: reason.into(),
    })
}
