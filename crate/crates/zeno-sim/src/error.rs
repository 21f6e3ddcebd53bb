use thiserror::Error;

/// Errors returned by state, schedule and estimator operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("measurement pair must address two distinct qubits (got {index} twice)")]
    DuplicateQubit { index: usize },

    /// A normalized state was required but the input is flagged (or measured)
    /// as unnormalized.
    #[error("normalization contract violated: squared norm is {norm2}")]
    NormContract { norm2: f64 },

    #[error("cannot normalize a state with zero norm")]
    DegenerateState,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A numerical precondition failed (e.g. the input to a cluster expansion
    /// is not close enough to a cluster state).
    #[error("numerical contract violated: {0}")]
    ContractViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
