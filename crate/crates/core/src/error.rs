use thiserror::Error;

/// Errors raised by optimizers, combinators and the selector.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("optimizer budget of {budget} asks is exhausted")]
    BudgetExhausted { budget: usize },

    #[error("objective value {0} is not finite")]
    NonFiniteValue(f64),

    #[error("recommend() called before any observation was told")]
    NothingObserved,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid problem descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("invalid combinator specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
