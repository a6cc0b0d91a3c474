use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An intermediate exponential left the finite `f64` range.
    #[error("range error: {0}")]
    Range(String),
    /// Arguments outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    /// A denominator built from the inputs vanished.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}
