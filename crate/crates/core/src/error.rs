use thiserror::Error;

/// Unified error type for every fallible operation in the crate.
///
/// Errors mean the *tool* could not do its job (bad input, blown resource
/// budget, internal inconsistency).  Mathematical outcomes — including
/// negative ones — are never errors; they are verdicts carried in reports.
#[derive(Debug, Error)]
pub enum Error {
    /// A textual input (graph file, system file, descriptor, element
    /// literal) failed to parse.  `line` is 1-based; 0 means "no line".
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Structurally well-formed input that violates a documented
    /// precondition (mismatched graphs, non-ideal generators, wrong
    /// dimensions, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// A documented precondition of an operation does not hold
    /// (e.g. asking for faithfulness where it is undefined).
    #[error("precondition not met: {0}")]
    Precondition(String),

    /// A hard resource budget was exceeded (tensor dimension cap, ...).
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// An internal invariant failed; always a bug, never a verdict.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
