use thiserror::Error;

/// Errors raised by the library. Negative verdicts (anisotropic, not found,
/// undecided) are values, never errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero input: {0}")]
    Zero(&'static str),

    #[error("singular form: {0}")]
    Singular(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("internal error (should be unreachable): {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
