use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("config field `{field}`: {msg}")]
    Config { field: String, msg: String },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("vertex {0} has zero degree")]
    ZeroDegree(usize),

    #[error("representation mismatch: {0}")]
    KindMismatch(String),

    #[error("spectral gap collapsed: {0}")]
    GapCollapse(String),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("vectors are not orthonormal (max deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("indicator column {0} is parallel to the replacement vector")]
    RankCollapse(usize),
}

impl Error {
    /// True for failures of the numerical pipeline (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::GapCollapse(_)
                | Error::DegenerateSpectrum(_)
                | Error::NotPsd(_)
                | Error::Eigen(_)
                | Error::NotOrthonormal(_)
                | Error::RankCollapse(_)
        )
    }

    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config { field: field.into(), msg: msg.into() }
    }
}
