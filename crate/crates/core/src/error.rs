use thiserror::Error;

/// Textual syntax errors (ordinals, club literals, sequence files, tuples).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{msg}")]
pub struct ParseError {
    msg: String,
}

impl ParseError {
    pub fn new(msg: impl Into<String>) -> Self {
        ParseError { msg: msg.into() }
    }

    /// Attaches a line/position prefix, used by the sequence file parser.
    pub fn at(self, line: usize) -> Self {
        ParseError {
            msg: format!("line {line}: {}", self.msg),
        }
    }
}

/// Errors from sequence construction and queries.
#[derive(Debug, Clone, Error)]
pub enum SeqError {
    #[error("index {0} is not a valid sequence index")]
    InvalidIndex(String),
    #[error("index {0} has length {1}, exceeding the sequence dimension {2}")]
    IndexTooLong(String, usize, usize),
    #[error("no club stored for the accumulation-point index {0}")]
    MissingClub(String),
    #[error("{0}")]
    BadConstruction(String),
    #[error("{0} is not in the sequence domain")]
    NotInDomain(String),
}

/// Errors from the walk recursion.
#[derive(Debug, Clone, Error)]
pub enum WalkError {
    #[error("walk input {0}: {1}")]
    MalformedInput(String, String),
    #[error("walk exceeded the node cap of {0}")]
    CapExceeded(usize),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

/// Errors from club construction.
#[derive(Debug, Clone, Error)]
pub enum ClubError {
    #[error("set {0} is not closed below its strict supremum (missing {1})")]
    NotClosed(String, String),
    #[error("club element {0} is not below the bound {1}")]
    OutOfBound(String, String),
    #[error("{0}")]
    BadForm(String),
}
