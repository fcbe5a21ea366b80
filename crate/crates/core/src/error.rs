use thiserror::Error;

/// Violations of the structural invariants of the compact descriptions.
///
/// Row, column, and coordinate indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("basis vectors are linearly dependent (rank {rank} < k = {k})")]
    DependentBasis { rank: usize, k: usize },
    #[error("gamma must be a nonzero complex scalar")]
    ZeroGamma,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("generators {0} and {1} do not commute")]
    NonCommutingRows(usize, usize),
    #[error("generators are linearly dependent")]
    DependentRows,
    #[error("expected {expected} generators, found {found}")]
    WrongRowCount { expected: usize, found: usize },
    #[error("tableau entry {0} is not Hermitian")]
    NotHermitian(usize),
    #[error("tableau entries for qubits {0} and {1} violate the commutation pattern")]
    BadCommutation(usize, usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("invalid check matrix: {0}")]
    InvalidCheckMatrix(ValidationError),
    #[error("invalid tableau: {0}")]
    InvalidTableau(ValidationError),
    #[error("check-matrix sign constraints are inconsistent")]
    ContradictorySigns,
    #[error("{what} on {n} qubits exceeds the limit of {max}")]
    TooLarge {
        what: &'static str,
        n: usize,
        max: usize,
    },
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot allocate {0} amplitudes")]
    Allocation(usize),
    #[error(transparent)]
    Parse(#[from] crate::io::ParseError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
