use std::path::PathBuf;

use thiserror::Error;

use crate::sexpr::Pos;

/// Errors surfaced by every stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },

    #[error("{pos}: {msg}")]
    Spec { pos: Pos, msg: String },

    #[error("invalid formula: {0}")]
    Desugar(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("encoding error: {0}")]
    Encode(String),

    #[error("history error: {0}")]
    History(String),

    #[error("DIMACS error: line {line}: {msg}")]
    Dimacs { line: usize, msg: String },

    #[error("solver executable `{0}` not found on the search path")]
    SolverMissing(String),

    #[error("solver `{solver}` produced unparsable output: {msg}")]
    SolverOutput { solver: String, msg: String },

    #[error("solver `{solver}` exited with status {status} and no verdict")]
    SolverFailed { solver: String, status: String },

    #[error("solver model violates clause {clause}")]
    BadModel { clause: usize },

    #[error("solver gave up after {0} conflicts")]
    Timeout(u64),

    #[error("no completeness bound found up to {0}")]
    BoundExhausted(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
