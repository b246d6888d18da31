use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("mode {mode} out of range for an order-{order} tensor")]
    ModeOutOfRange { mode: usize, order: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid dimensions: {0}")]
    InvalidDims(String),

    #[error("invalid rank: {0}")]
    InvalidRank(String),

    #[error("invalid processing order: {0}")]
    InvalidOrder(String),

    #[error("parameter constraint violated: {0}")]
    Parameter(String),

    #[error("reference tensor has zero norm")]
    ZeroReference,

    #[error("malformed model container: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
