//! Dense materialization of stabilizer states and Clifford matrices.
//!
//! Compact stabilizer-formalism data (quadratic forms, check matrices,
//! Clifford tableaux) is expanded into explicit amplitude vectors and
//! unitary matrices in time linear in the size of the output:
//!
//! * [`qf_expand::expand`] turns a [`QuadraticForm`] into a `2^n` state vector
//!   with a Gray-code walk that caches the parity word `B y`, so each amplitude
//!   costs a constant number of word operations.
//! * [`reduction::check_to_qf`] converts a [`CheckMatrix`] to a quadratic form,
//!   giving check matrix to state vector in `O(2^n)`.
//! * [`pauli::apply_pauli`] applies `omega X(w) Z(u)` to a dense vector in `O(2^n)`.
//! * [`clifford::expand_tableau`] expands a [`CliffordTableau`] into its dense
//!   `2^n x 2^n` matrix in `O(4^n)` using the column recurrence
//!   `C|x ^ e_t> = V_t C|x>`.
//!
//! Bit convention: qubit (or coordinate) 1 is the least significant bit of
//! every index and word. Text formats print coordinate 1 leftmost.

pub mod bench;
pub mod clifford;
pub mod error;
#[doc(hidden)]
pub mod instances;
pub mod io;
pub mod model;
pub mod pauli;
pub mod qf_expand;
pub mod reduction;
pub mod words;

pub use error::{Error, Result, ValidationError};
pub use model::{
    CheckMatrix, CheckRow, CliffordTableau, DenseMatrix, DenseState, PauliOp, Phase, QuadraticForm,
};

use words::MAX_WORD_QUBITS;

/// Environment variable overriding [`Limits::max_state_qubits`].
pub const MAX_N_ENV: &str = "STABMAT_MAX_N";

/// Size caps guarding against accidental multi-gigabyte outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for a `2^n` state vector.
    pub max_state_qubits: usize,
    /// Largest `n` for a `2^n x 2^n` matrix.
    pub max_matrix_qubits: usize,
    /// Largest `n` for the brute-force dense checks (Pauli matrices, conjugation).
    pub max_oracle_qubits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_state_qubits: 26,
            max_matrix_qubits: 13,
            max_oracle_qubits: 8,
        }
    }
}

impl Limits {
    /// Caps with the state limit taken from `STABMAT_MAX_N` when set.
    ///
    /// The matrix limit follows as half the state limit, since both bound the
    /// number of output entries.
    pub fn from_env() -> Limits {
        let mut limits = Limits::default();
        if let Some(n) = std::env::var(MAX_N_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
        {
            let n = n.min(MAX_WORD_QUBITS);
            limits.max_state_qubits = n;
            limits.max_matrix_qubits = n / 2;
        }
        limits
    }

    pub(crate) fn check_state(&self, what: &'static str, n: usize) -> Result<()> {
        let max = self.max_state_qubits.min(MAX_WORD_QUBITS);
        if n > max {
            return Err(Error::TooLarge { what, n, max });
        }
        Ok(())
    }

    pub(crate) fn check_matrix(&self, what: &'static str, n: usize) -> Result<()> {
        let max = self.max_matrix_qubits.min(MAX_WORD_QUBITS / 2);
        if n > max {
            return Err(Error::TooLarge { what, n, max });
        }
        Ok(())
    }

    pub(crate) fn check_oracle(&self, what: &'static str, n: usize) -> Result<()> {
        if n > self.max_oracle_qubits {
            return Err(Error::TooLarge {
                what,
                n,
                max: self.max_oracle_qubits,
            });
        }
        Ok(())
    }
}

/// How a Gray step maps its flip word to per-coordinate data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlipLookup {
    /// Index length-`k` tables by the trailing-zero count of the step counter.
    #[default]
    TrailingZeros,
    /// Index length-`2^k` tables directly by the one-hot flip word.
    OneHot,
}
