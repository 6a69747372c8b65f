//! Crate-wide error type.

use thiserror::Error;

use crate::complex::{BuildError, Violation};
use crate::map::{MapBuildError, MapViolation};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid complex {name:?}: {}", format_list(violations))]
    InvalidComplex { name: String, violations: Vec<Violation> },

    #[error("invalid map: {}", format_list(violations))]
    InvalidMap { violations: Vec<MapViolation> },

    #[error(transparent)]
    Build(#[from] BuildError),

    #[error(transparent)]
    MapBuild(#[from] MapBuildError),

    #[error("{0}")]
    BadInput(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error(transparent)]
    Arithmetic(#[from] crate::ext::IndeterminateSum),

    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("parse error in {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
}

fn format_list<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub fn bad_input<S: Into<String>>(message: S) -> Error {
        Error::BadInput(message.into())
    }
}
