use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A Walker pattern that cannot be built, e.g. planes not dividing the satellite count.
    #[error("invalid Walker constellation: {0}")]
    InvalidWalker(String),

    /// A numeric argument outside its domain.
    #[error("invalid input `{name}`: {reason}")]
    InvalidInput { name: &'static str, reason: String },

    #[error("site and satellite positions coincide")]
    CoincidentPoints,

    #[error("insufficient geometry: {visible} satellites observed, at least 4 required")]
    InsufficientGeometry { visible: usize },

    #[error("singular geometry: normal matrix condition number {condition:.3e} exceeds {limit:.0e}")]
    SingularGeometry { condition: f64, limit: f64 },

    /// Every (site, epoch) sample lacked a defined PDOP.
    #[error("no coverage: none of {samples} samples had a defined PDOP")]
    NoCoverage { samples: usize },

    #[error("scenario syntax error at line {line}, column {column}: {message}")]
    ScenarioSyntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("scenario key `{key}`: {message}")]
    ScenarioValue { key: String, message: String },

    #[error("unknown scenario key `{0}`")]
    UnknownKey(String),

    #[error("format `{format}` is not supported for {shape} results")]
    UnsupportedFormat { format: &'static str, shape: &'static str },

    #[error("cannot read scenario {}: {source}", path.display())]
    ScenarioRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn input(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn scenario(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ScenarioValue {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn scenario_file(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::ScenarioRead {
            path: path.to_path_buf(),
            source,
        }
    }

    /// True for errors caused by the caller's inputs rather than by the computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidWalker(_)
                | Error::InvalidInput { .. }
                | Error::ScenarioSyntax { .. }
                | Error::ScenarioValue { .. }
                | Error::ScenarioRead { .. }
                | Error::UnknownKey(_)
                | Error::UnsupportedFormat { .. }
        )
    }
}
