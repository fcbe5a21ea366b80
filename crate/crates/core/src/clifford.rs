//! Clifford tableau to dense matrix in `O(4^n)`.
//!
//! Column `x` of `C` is `C|x>`. Since `X_t |x> = |x ^ e_t>`, consecutive Gray
//! columns satisfy `C|x ^ e_t> = V_t C|x>` with `V_t = C X_t C^dag`, so each
//! column costs one Pauli application to the previous one. The first column
//! `C|0>` is the stabilizer state of `U_1..U_n`.

use num_complex::Complex64;

use crate::error::{Error, Result, ValidationError};
use crate::model::{CheckMatrix, CliffordTableau, DenseMatrix, DenseState};
use crate::pauli::{apply_pauli_into, pauli_dense_with};
use crate::qf_expand::expand_with;
use crate::reduction::check_to_qf;
use crate::words::{flip_index, gray, BitWord};
use crate::{FlipLookup, Limits};

fn validated(tab: &CliffordTableau) -> Result<()> {
    tab.validate().map_err(Error::InvalidTableau)
}

/// `C|0...0>`, the state stabilized by `U_1..U_n`, with the reduction's
/// positive-real phase convention.
pub fn first_column(tab: &CliffordTableau) -> Result<DenseState> {
    first_column_with(tab, &Limits::default())
}

pub fn first_column_with(tab: &CliffordTableau, limits: &Limits) -> Result<DenseState> {
    validated(tab)?;
    let rows = tab
        .z_images
        .iter()
        .enumerate()
        .map(|(t, u)| {
            u.to_check_row()
                .ok_or(Error::InvalidTableau(ValidationError::NotHermitian(t + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let qf = check_to_qf(&CheckMatrix::new(tab.n, rows))?;
    expand_with(&qf, limits, FlipLookup::default())
}

/// Expands the tableau given its first column `c0 = C|0>`.
pub fn tableau_to_matrix(tab: &CliffordTableau, c0: &DenseState) -> Result<DenseMatrix> {
    tableau_to_matrix_with(tab, c0, &Limits::default(), 1)
}

/// As [`tableau_to_matrix`], optionally splitting the Gray sequence into
/// `segments` contiguous pieces walked on separate threads.
///
/// `segments` is rounded down to a power of two no larger than `2^n`. Steps
/// `s 2^j .. (s+1) 2^j` of the Gray sequence only touch columns whose high
/// bits equal `gray(s)`, so each segment owns one contiguous block of columns.
/// The output is bit-identical for every segment count.
pub fn tableau_to_matrix_with(
    tab: &CliffordTableau,
    c0: &DenseState,
    limits: &Limits,
    segments: usize,
) -> Result<DenseMatrix> {
    validated(tab)?;
    let n = tab.n;
    if c0.n != n || c0.amps.len() != 1 << n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c0.n,
        });
    }
    limits.check_matrix("dense Clifford matrix", n)?;
    let mut m = DenseMatrix::zeros(n)?;
    write_columns(tab, &c0.amps, &mut m.entries, segments);
    Ok(m)
}

/// Writes the dense matrix into `out`, which must have length `4^n`. Every
/// entry is overwritten, so `out` need not be cleared.
pub fn tableau_to_matrix_into(
    tab: &CliffordTableau,
    c0: &[Complex64],
    out: &mut [Complex64],
    segments: usize,
) -> Result<()> {
    validated(tab)?;
    let n = tab.n;
    if c0.len() != 1 << n || out.len() != 1 << (2 * n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c0.len().trailing_zeros() as usize,
        });
    }
    write_columns(tab, c0, out, segments);
    Ok(())
}

fn write_columns(tab: &CliffordTableau, c0: &[Complex64], out: &mut [Complex64], segments: usize) {
    let n = tab.n;
    let dim = 1usize << n;
    let seg_bits = (segments.max(1).ilog2() as usize).min(n);
    if seg_bits == 0 {
        walk_block(tab, c0, out, 0, 0..1u64 << n, dim);
        return;
    }
    let low_bits = n - seg_bits;
    let block = (1usize << low_bits) * dim;
    std::thread::scope(|scope| {
        for (high, chunk) in out.chunks_mut(block).enumerate() {
            let s = inverse_gray(high as u64);
            let steps = s << low_bits..(s + 1) << low_bits;
            let base = (high as u64) << low_bits;
            scope.spawn(move || walk_block(tab, c0, chunk, base, steps, dim));
        }
    });
}

/// Walks Gray steps `steps`, writing column `x` at `out[(x - base) * dim..]`.
/// Every column visited lies in `base..base + out.len() / dim`.
///
/// The walk itself runs between two scratch columns that stay in cache; each
/// finished column is then streamed to `out`, so the output is written once
/// and never read back.
fn walk_block(
    tab: &CliffordTableau,
    c0: &[Complex64],
    out: &mut [Complex64],
    base: u64,
    steps: std::ops::Range<u64>,
    dim: usize,
) {
    let mut x = gray(steps.start);
    let mut cur = vec![Complex64::new(0.0, 0.0); dim];
    let mut next = vec![Complex64::new(0.0, 0.0); dim];
    column_from_origin(tab, c0, x, &mut cur);
    let column = |x: BitWord| ((x - base) as usize) * dim;
    store_column(&cur, &mut out[column(x)..column(x) + dim]);
    for m in steps.start + 1..steps.end {
        let t = flip_index(m);
        x ^= 1 << t;
        apply_pauli_into(&cur, &tab.x_images[t], &mut next);
        std::mem::swap(&mut cur, &mut next);
        store_column(&cur, &mut out[column(x)..column(x) + dim]);
    }
    store_fence();
}

#[cfg(target_arch = "x86_64")]
fn store_column(src: &[Complex64], dst: &mut [Complex64]) {
    use std::arch::x86_64::_mm_stream_si64;
    assert_eq!(src.len(), dst.len());
    let ptr = dst.as_mut_ptr() as *mut i64;
    for (i, z) in src.iter().enumerate() {
        // SAFETY: `ptr` addresses `2 * dst.len()` aligned f64 slots, and
        // `_mm_stream_si64` needs only SSE2, which every x86_64 target has.
        unsafe {
            _mm_stream_si64(ptr.add(2 * i), z.re.to_bits() as i64);
            _mm_stream_si64(ptr.add(2 * i + 1), z.im.to_bits() as i64);
        }
    }
}

#[cfg(not(target_arch = "x86_64"))]
fn store_column(src: &[Complex64], dst: &mut [Complex64]) {
    dst.copy_from_slice(src);
}

/// Orders the streaming stores before anything the caller does next.
fn store_fence() {
    #[cfg(target_arch = "x86_64")]
    // SAFETY: SSE2 is always available on x86_64.
    unsafe {
        std::arch::x86_64::_mm_sfence();
    }
}

/// `C|x> = prod_{t in x} V_t C|0>`; the `V_t` commute, so order is irrelevant.
fn column_from_origin(tab: &CliffordTableau, c0: &[Complex64], x: BitWord, dst: &mut [Complex64]) {
    dst.copy_from_slice(c0);
    if x == 0 {
        return;
    }
    let mut scratch = vec![Complex64::new(0.0, 0.0); c0.len()];
    for t in 0..tab.n {
        if (x >> t) & 1 == 1 {
            apply_pauli_into(dst, &tab.x_images[t], &mut scratch);
            dst.copy_from_slice(&scratch);
        }
    }
}

fn inverse_gray(g: u64) -> u64 {
    let mut m = g;
    let mut shift = g >> 1;
    while shift != 0 {
        m ^= shift;
        shift >>= 1;
    }
    m
}

/// Dense matrix of the Clifford described by `tab`.
pub fn expand_tableau(tab: &CliffordTableau) -> Result<DenseMatrix> {
    expand_tableau_with(tab, &Limits::default(), 1)
}

pub fn expand_tableau_with(
    tab: &CliffordTableau,
    limits: &Limits,
    segments: usize,
) -> Result<DenseMatrix> {
    validated(tab)?;
    limits.check_matrix("dense Clifford matrix", tab.n)?;
    let c0 = first_column_with(tab, limits)?;
    tableau_to_matrix_with(tab, &c0, limits, segments)
}

/// Largest of `|M Z_t M^dag - U_t|`, `|M X_t M^dag - V_t|` and `|M^dag M - I|`
/// (entrywise maximum modulus).
pub fn conjugation_oracle(m: &DenseMatrix, tab: &CliffordTableau) -> Result<f64> {
    conjugation_oracle_with(m, tab, &Limits::default())
}

pub fn conjugation_oracle_with(
    m: &DenseMatrix,
    tab: &CliffordTableau,
    limits: &Limits,
) -> Result<f64> {
    if m.n != tab.n || m.entries.len() != 1 << (2 * m.n) {
        return Err(Error::DimensionMismatch {
            expected: tab.n,
            found: m.n,
        });
    }
    limits.check_oracle("conjugation oracle", m.n)?;
    let n = m.n;
    let adj = m.adjoint();
    let mut worst = adj.matmul(m).max_diff(&DenseMatrix::identity(n));
    let images = tab
        .z_images
        .iter()
        .zip(0..n)
        .map(|(u, q)| (crate::PauliOp::z(n, q), u));
    let images = images.chain(
        tab.x_images
            .iter()
            .zip(0..n)
            .map(|(v, q)| (crate::PauliOp::x(n, q), v)),
    );
    for (generator, image) in images {
        let conj = m
            .matmul(&pauli_dense_with(&generator, limits)?)
            .matmul(&adj);
        worst = worst.max(conj.max_diff(&pauli_dense_with(image, limits)?));
    }
    Ok(worst)
}
