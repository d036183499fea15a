use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("region has no finite bounding envelope: {0}")]
    UnboundedRegion(String),

    #[error("no closed-form volume for {0}")]
    AnalyticUnavailable(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(String),

    #[error("preset constraint violated: {0}")]
    PresetConstraintViolated(String),

    #[error("invalid cutoff radius {0}: must exceed 1")]
    InvalidRadius(f64),

    #[error("Hölder exponent relation violated: {0}")]
    ExponentRelationViolated(String),

    #[error("decay fit needs at least {needed} usable points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
