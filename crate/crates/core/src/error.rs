use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} exceeded cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("variable error: {0}")]
    Variable(String),

    #[error("not a group: {axiom} fails at {witness:?}")]
    NotAGroup { axiom: &'static str, witness: Vec<usize> },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("duplicate points at indices {0} and {1}")]
    DuplicatePoints(usize, usize),

    #[error("comparison undecided: {0}")]
    Undecided(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, cap: usize) -> Self {
        Error::CapExceeded { what, cap }
    }
}
