//! Check matrix to quadratic form.
//!
//! Gaussian elimination on the X-block splits the generators into `k` rows
//! whose X-patterns are in reduced row echelon form (these span the support
//! directions `v_t`) and `n - k` diagonal rows `+-Z(u)` that pin the support
//! offset `h` through `u . h = sign`. The phase data then follows from the
//! stabilizer condition `psi[x ^ v_t] = omega_t (-1)^(u_t . x) psi[x]`:
//!
//! * `d_t + 2 J_tt = omega_t + 2 (u_t . h)` (mod 4),
//! * `J_st = u_t . v_s` for `s < t`.
//!
//! The whole reduction is `O(n^2)` word operations.

use crate::error::{Error, Result};
use crate::model::{CheckMatrix, DenseState, PauliOp, Phase, QuadraticForm};
use crate::pauli::apply_pauli;
use crate::words::{self, BitWord};

/// Largest `n` accepted by [`stabilizer_eigencheck`].
pub const EIGENCHECK_MAX_QUBITS: usize = 12;

/// Reduces a valid check matrix to the quadratic form of its stabilizer state.
///
/// Output convention: `gamma = 2^(-k/2)` (so the amplitude at `h` is positive
/// real), basis vectors in reduced row echelon form with ascending pivots,
/// and `h` zero on every pivot coordinate.
pub fn check_to_qf(cm: &CheckMatrix) -> Result<QuadraticForm> {
    cm.validate().map_err(Error::InvalidCheckMatrix)?;
    let n = cm.n;
    let mut rows: Vec<PauliOp> = cm.paulis().collect();

    // Eliminate on the X-block. Generators commute, so row products stay Hermitian.
    let mut pivots = Vec::new();
    for col in 0..n {
        let rank = pivots.len();
        let Some(r) = (rank..n).find(|&r| (rows[r].w >> col) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, r);
        let pivot = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && (row.w >> col) & 1 == 1 {
                *row = row.mul(&pivot);
            }
        }
        pivots.push(col);
    }
    let k = pivots.len();
    let (x_rows, z_rows) = rows.split_at(k);

    let mut shift = solve_offset(n, z_rows)?;
    for (row, &col) in x_rows.iter().zip(&pivots) {
        if (shift >> col) & 1 == 1 {
            shift ^= row.w;
        }
    }

    let basis: Vec<BitWord> = x_rows.iter().map(|r| r.w).collect();
    let mut linear = 0;
    let mut quadratic = vec![0; k];
    for (t, row) in x_rows.iter().enumerate() {
        let a = row.phase + Phase::sign(words::dot(row.u, shift));
        let a = a.exponent() as BitWord;
        linear |= (a & 1) << t;
        quadratic[t] |= (a >> 1) << t;
        for (s, &v) in basis.iter().enumerate().take(t) {
            if words::dot(row.u, v) {
                quadratic[s] |= 1 << t;
            }
        }
    }

    Ok(QuadraticForm {
        n,
        shift,
        basis,
        linear,
        quadratic,
        gamma: QuadraticForm::normalizing_gamma(k),
    })
}

/// Solves `u_r . h = sign_r` for the diagonal generators `(-1)^sign_r Z(u_r)`,
/// with every free coordinate of `h` set to zero.
fn solve_offset(n: usize, z_rows: &[PauliOp]) -> Result<BitWord> {
    let mut system: Vec<(BitWord, bool)> = Vec::with_capacity(z_rows.len());
    for row in z_rows {
        debug_assert_eq!(row.w, 0);
        let sign = match row.phase {
            Phase::ONE => false,
            Phase::MINUS_ONE => true,
            _ => return Err(Error::ContradictorySigns),
        };
        system.push((row.u, sign));
    }
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(r) = (rank..system.len()).find(|&r| (system[r].0 >> col) & 1 == 1) else {
            continue;
        };
        system.swap(rank, r);
        let pivot = system[rank];
        for (i, eq) in system.iter_mut().enumerate() {
            if i != rank && (eq.0 >> col) & 1 == 1 {
                eq.0 ^= pivot.0;
                eq.1 ^= pivot.1;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if system[rank..].iter().any(|&(_, sign)| sign) {
        return Err(Error::ContradictorySigns);
    }
    let mut h = 0;
    for (eq, &col) in system.iter().zip(&pivots) {
        if eq.1 {
            h |= 1 << col;
        }
    }
    Ok(h)
}

/// Largest entrywise deviation `max_r |G_r psi - psi|`.
pub fn stabilizer_eigencheck(cm: &CheckMatrix, psi: &DenseState) -> Result<f64> {
    if cm.n != psi.n {
        return Err(Error::DimensionMismatch {
            expected: cm.n,
            found: psi.n,
        });
    }
    if cm.n > EIGENCHECK_MAX_QUBITS {
        return Err(Error::TooLarge {
            what: "eigencheck",
            n: cm.n,
            max: EIGENCHECK_MAX_QUBITS,
        });
    }
    let mut worst = 0.0f64;
    for g in cm.paulis() {
        let image = apply_pauli(psi, &g)?;
        worst = worst.max(image.max_diff(psi));
    }
    Ok(worst)
}

/// Convenience: check matrix straight to its dense state vector.
pub fn check_to_state(cm: &CheckMatrix) -> Result<DenseState> {
    crate::qf_expand::expand(&check_to_qf(cm)?)
}
