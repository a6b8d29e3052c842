use std::path::PathBuf;

/// Errors produced by the simfiber library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("requested amplitude {requested} exceeds the synthesizable maximum {max}")]
    AmplitudeOutOfRange { requested: f64, max: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("invalid {what}: {message}")]
    InvalidParameter { what: &'static str, message: String },

    #[error("degenerate geometry: zero distance between atom {row} and atom {col}")]
    DegenerateGeometry { row: usize, col: usize },

    #[error("layer index {index} out of range 1..={count}")]
    InvalidLayer { index: usize, count: usize },

    #[error("channel gain alpha is zero; NMSE is undefined")]
    ZeroGain,

    #[error("matrix is singular or not positive definite: {0}")]
    Singular(&'static str),

    #[error("channel rank {rank} is below the requested stream count {streams}")]
    RankDeficient { rank: usize, streams: usize },

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("I/O error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(
        context: &'static str,
        expected: impl std::fmt::Display,
        found: impl std::fmt::Display,
    ) -> Self {
        Error::DimensionMismatch {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    pub(crate) fn invalid(what: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            what,
            message: message.into(),
        }
    }
}
