use thiserror::Error;

/// Errors raised by the decomposition, synthesis and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is out of range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("{what}: expected length {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("unsupported matrix class `{0}` for this operation")]
    UnsupportedClass(String),

    #[error("labels {first} and {second} do not commute")]
    NonCommuting { first: String, second: String },

    #[error("label {0} is not diagonal (non-zero X part)")]
    NotDiagonal(String),

    #[error("weight of {label} has imaginary part {imag:e}; the operator is not Hermitian")]
    NonHermitian { label: String, imag: f64 },

    #[error("{width} qubits exceeds the dense simulation cap of {cap}")]
    CapExceeded { width: usize, cap: usize },

    #[error("invalid Trotter plan: {0}")]
    InvalidPlan(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitianMatrix(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("specialized and generic weights disagree by {0:e}")]
    Inconsistent(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
