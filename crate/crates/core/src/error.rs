use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("semantic error at line {line}: {message}")]
    Semantic { line: usize, message: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("restrictions conflict on x{var}")]
    Conflict { var: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("decision tree exceeds the node cap of {cap}")]
    TreeTooLarge { cap: usize },

    #[error("exhaustive sweep over {n} variables exceeds the cutoff of {cutoff}")]
    CutoffExceeded { n: usize, cutoff: usize },

    #[error("failure probability {0} is outside (0, 1/2]")]
    InvalidProbability(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("path does not follow the canonical tree: {0}")]
    PathMismatch(String),

    #[error("inconsistent encoding: {0}")]
    InconsistentEncoding(String),

    #[error("partition has a region with a non-trivial guard")]
    GuardedRegion,

    #[error("non-constant payload in partition")]
    NonConstantPayload,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
