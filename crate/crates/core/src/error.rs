use thiserror::Error;

/// Errors raised by phase-space operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unphysical state: {0}")]
    Unphysical(String),
    #[error("ordering mismatch: {0}")]
    OrderingMismatch(String),
    #[error("mode index error: {0}")]
    Index(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("symplectic eigenvalues not conjugate-paired: {0}")]
    NumericDegeneracy(String),
    #[error("symplectic diagonalization failed (residual {residual:e}): {reason}")]
    DiagonalizationFailure { residual: f64, reason: String },
    #[error("state is not pure (purity {purity})")]
    NotPure { purity: f64 },
    #[error("hamiltonian has no ground state: {0}")]
    NoGroundState(String),
    #[error("Fock truncation too small: {0}")]
    Truncation(String),
    #[error("out of supported range: {0}")]
    Range(String),
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
