use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("simplex is not properly colored: color {0} appears twice")]
    DuplicateColor(usize),

    #[error("color {color} is outside [0, {n}]")]
    ColorOutOfRange { color: usize, n: usize },

    #[error("simplex {0} is not a member of complex {1}")]
    NotInComplex(String, String),

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("vertex map is not simplicial: image of {0} is not a simplex of the target")]
    NotSimplicial(String),

    #[error("chain map has no image for simplex {0}")]
    UnmappedSimplex(String),

    #[error("complex mismatch: expected {expected}, found {found}")]
    ComplexMismatch { expected: String, found: String },

    #[error("homology generator check failed: {0}")]
    GeneratorCheckFailed(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),

    #[error("enumeration budget exceeded: needs {needed} facet evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
