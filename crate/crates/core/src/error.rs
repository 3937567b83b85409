use thiserror::Error;

/// Errors raised by the factorization kernels and drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    /// Operand shapes do not conform.
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    /// A caller-side precondition was violated (bad block width, empty input, ...).
    #[error("contract violation in {op}: {detail}")]
    ContractViolation { op: &'static str, detail: String },

    /// Triangular solve hit an exactly zero diagonal entry.
    #[error("singular triangular factor: zero diagonal at index {index}")]
    SingularTriangular { index: usize },

    /// An iterative kernel ran out of iterations.
    #[error("{op} failed to converge after {iterations} iterations")]
    NoConvergence { op: &'static str, iterations: usize },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

pub(crate) fn mismatch(op: &'static str, detail: impl Into<String>) -> LinalgError {
    LinalgError::DimensionMismatch {
        op,
        detail: detail.into(),
    }
}

pub(crate) fn contract(op: &'static str, detail: impl Into<String>) -> LinalgError {
    LinalgError::ContractViolation {
        op,
        detail: detail.into(),
    }
}
