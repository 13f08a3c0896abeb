use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable sets differ ({0} vs {1} variables)")]
    VarMismatch(usize, usize),

    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { dividend: String, divisor: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("size limit exceeded: {0}")]
    TooLarge(String),

    #[error("not a chain map: {0}")]
    NotChainMap(String),

    #[error("invalid Morse matching: {0}")]
    InvalidMatching(String),

    #[error("submodule is not closed under the differential: {0}")]
    NotDifferentialClosed(String),

    #[error("submodule is not a dg ideal: {0}")]
    NotDgIdeal(String),

    #[error("quotient is not free on basis labels: {0}")]
    QuotientNotFree(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
