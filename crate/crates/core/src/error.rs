use thiserror::Error;

use crate::model::BeamId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value falls outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    /// A plan, restriction set or model refers to beams inconsistently.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("model build error: {0}")]
    Build(String),

    #[error("routing error: beam {beam} has no visible satellite at t = {minute} min")]
    Routing { beam: BeamId, minute: f64 },

    #[error("extraction error: {0}")]
    Extraction(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    /// A file parsed but its content violates the schema.
    #[error("invalid `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { path: path.into(), message: message.into() }
    }
}
