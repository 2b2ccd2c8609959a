use thiserror::Error;

/// Errors surfaced by the navigation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Caller supplied something outside an operation's domain.
    #[error("invalid input: {0}")]
    Input(String),

    /// Malformed text input (tree, metric or cover files).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A tree of a loaded cover is shorter than the metric for some pair.
    #[error("tree {tree} violates domination at pair ({x}, {y}): tree distance {tree_dist} < metric distance {metric_dist}")]
    Domination {
        tree: usize,
        x: usize,
        y: usize,
        tree_dist: f64,
        metric_dist: f64,
    },

    /// No tree of a loaded cover achieves the declared stretch for a pair.
    #[error("cover misses stretch {gamma} at pair ({x}, {y}): best tree distance {best} vs metric distance {metric_dist}")]
    Coverage {
        gamma: f64,
        x: usize,
        y: usize,
        best: f64,
        metric_dist: f64,
    },

    /// An internal consistency check failed.
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
