use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("moment of order {requested} unavailable for `{spec}` (moments known up to {max_available})")]
    MomentUnavailable {
        spec: String,
        requested: usize,
        max_available: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("exact arithmetic required: {0}")]
    InexactUnsupported(String),

    #[error("expected exactly one coefficient sign variation, found {variations}")]
    NotSingleVariation { variations: usize },

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("parse error: {0}")]
    Parse(String),
}
