use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("carrier of {n} points exceeds the limit of {max} for this operation")]
    CarrierTooLarge { n: usize, max: usize },

    #[error("size mismatch: expected a carrier of {expected} points, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("point {point} is outside a carrier of {n} points")]
    PointOutOfRange { point: usize, n: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("empty carrier: {0}")]
    EmptyCarrier(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub(crate) fn too_large(n: usize, max: usize) -> Result<()> {
        if n > max {
            Err(Error::CarrierTooLarge { n, max })
        } else {
            Ok(())
        }
    }
}
