use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector must have at least one entry")]
    EmptyVector,

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    /// A parameter violates a stated hypothesis. The message names the inequality.
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("operator is not pointwise-evaluable: {0}")]
    NotEvaluable(&'static str),

    #[error("singular linear system")]
    Singular,

    /// A calculus rule was asked for a certificate outside its hypotheses.
    #[error("not covered: {0}")]
    NotCovered(String),

    /// Chain condition of the m-operator composition fails at position `k` (1-based).
    #[error("chain condition violated at position k = {k}: theta_k = {theta} must be < {bound}")]
    ChainViolation { k: usize, theta: f64, bound: f64 },

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("oracle failure: {0}")]
    Oracle(String),

    #[error("invalid step sequence: {0}")]
    StepSequence(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
