use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown problem `{name}`; valid names: {valid}")]
    UnknownProblem { name: String, valid: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("invalid problem spec: {0}")]
    InvalidProblem(String),

    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error(
        "objective returned non-finite value {value} for agent {agent} at iteration {iteration}"
    )]
    NonFiniteFitness {
        agent: usize,
        iteration: usize,
        value: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no baseline run with {workers} worker(s) for problem `{problem}`")]
    MissingBaseline { problem: String, workers: usize },

    #[error("run failed for problem `{problem}` ({workers} workers, run {run}): {source}")]
    Run {
        problem: String,
        workers: usize,
        run: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl Error {
    pub(crate) fn param(key: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.to_string(),
            reason: reason.into(),
        }
    }
}
