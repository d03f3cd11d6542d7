use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid palette: q = 0 with {edges} edges to color")]
    InvalidPalette { edges: usize },

    #[error("{what}: n = {n} outside supported range {min}..={max}")]
    Size {
        what: &'static str,
        n: usize,
        min: usize,
        max: usize,
    },

    #[error("perfect matching needs an even vertex count, got {0}")]
    Parity(usize),

    #[error("line {line}, field `{field}`: {msg}")]
    Parse {
        line: usize,
        field: String,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("root solve did not converge at x = {x}: {msg}")]
    Numeric { x: f64, msg: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("perfect matching failed: matched {matched} of {needed} (deficiency {})", needed - matched)]
    MatchingFailed { matched: usize, needed: usize },

    #[error("greedy stalled after accepting {accepted} of {target} edges")]
    GreedyStalled { accepted: usize, target: usize },

    #[error("no rainbow Hamilton completion found after {attempts} attempts")]
    CompletionFailed { attempts: usize },

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            field: field.into(),
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
