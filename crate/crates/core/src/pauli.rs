//! Applying `omega X(w) Z(u)` to a dense vector in `O(2^n)`.
//!
//! `X(w) Z(u) |x> = (-1)^(u.x) |x ^ w>`, so the output is a signed permutation
//! of the input. The input index runs over the Gray sequence; the only state
//! carried between steps is the output index `x ^ w` and the parity bit `u.x`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{zeroed, DenseMatrix, DenseState, PauliOp, Phase};
use crate::words::{self, flip_word, BitWord};
use crate::{FlipLookup, Limits};

/// Registers of the Pauli Gray walk: input index `x`, output index `z = x ^ w`,
/// parity `s = u.x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliWalkState {
    pub x: BitWord,
    pub z: BitWord,
    pub s: bool,
}

impl PauliWalkState {
    pub fn origin(w: BitWord) -> PauliWalkState {
        PauliWalkState {
            x: 0,
            z: w,
            s: false,
        }
    }

    #[inline(always)]
    pub fn advance(&mut self, f: BitWord, u_bit: bool) {
        self.x ^= f;
        self.z ^= f;
        self.s ^= u_bit;
    }
}

fn check_dims(psi: &DenseState, p: &PauliOp) -> Result<()> {
    if psi.n != p.n {
        return Err(Error::DimensionMismatch {
            expected: psi.n,
            found: p.n,
        });
    }
    if psi.amps.len() != 1 << psi.n {
        return Err(Error::DimensionMismatch {
            expected: psi.n,
            found: psi.amps.len().trailing_zeros() as usize,
        });
    }
    Ok(())
}

/// `p |psi>` via the Gray walk, into a freshly allocated vector.
pub fn apply_pauli(psi: &DenseState, p: &PauliOp) -> Result<DenseState> {
    apply_pauli_with(psi, p, FlipLookup::default())
}

pub fn apply_pauli_with(psi: &DenseState, p: &PauliOp, lookup: FlipLookup) -> Result<DenseState> {
    check_dims(psi, p)?;
    let mut out = zeroed(psi.amps.len())?;
    match lookup {
        FlipLookup::TrailingZeros => apply_pauli_into(&psi.amps, p, &mut out),
        FlipLookup::OneHot => apply_one_hot(&psi.amps, p, &mut out)?,
    }
    Ok(DenseState {
        n: psi.n,
        amps: out,
    })
}

/// Writes `p` applied to `src` into `dst`. Every entry of `dst` is overwritten.
///
/// Both slices must have length `2^p.n`.
pub fn apply_pauli_into(src: &[Complex64], p: &PauliOp, dst: &mut [Complex64]) {
    let len = 1u64 << p.n;
    assert_eq!(src.len() as u64, len);
    assert_eq!(dst.len() as u64, len);
    if p.phase.is_real() {
        walk_signed::<false>(src, p, dst);
    } else {
        walk_signed::<true>(src, p, dst);
    }
}

/// The Gray walk with `i^e` realized as an optional component swap plus
/// sign-bit flips, so the loop body is branch-free. Bitwise identical to
/// [`Phase::rotate`].
#[inline(always)]
fn walk_signed<const SWAP: bool>(src: &[Complex64], p: &PauliOp, dst: &mut [Complex64]) {
    const SIGN: u64 = 1 << 63;
    // i^e (a, b) = (+-a, +-b) for even e, (+-b, +-a) for odd e.
    let (mask_re, mask_im) = match p.phase.exponent() {
        0 => (0, 0),
        1 => (SIGN, 0),
        2 => (SIGN, SIGN),
        _ => (0, SIGN),
    };
    let write = |v: Complex64, s: bool| {
        let (a, b) = if SWAP { (v.im, v.re) } else { (v.re, v.im) };
        let neg = (s as u64) << 63;
        Complex64::new(
            f64::from_bits(a.to_bits() ^ mask_re ^ neg),
            f64::from_bits(b.to_bits() ^ mask_im ^ neg),
        )
    };
    let mut state = PauliWalkState::origin(p.w);
    dst[state.z as usize] = write(src[0], false);
    for m in 1..src.len() as u64 {
        let f = flip_word(m);
        state.advance(f, p.u & f != 0);
        dst[state.z as usize] = write(src[state.x as usize], state.s);
    }
}

/// The one-hot table variant: `L[2^t] = u_t`.
fn apply_one_hot(src: &[Complex64], p: &PauliOp, dst: &mut [Complex64]) -> Result<()> {
    let len = src.len();
    let mut table: Vec<bool> = Vec::new();
    table
        .try_reserve_exact(len)
        .map_err(|_| Error::Allocation(len))?;
    table.resize(len, false);
    for t in 0..p.n {
        table[1 << t] = (p.u >> t) & 1 == 1;
    }
    let (pos, neg) = (p.phase, p.phase + Phase::MINUS_ONE);
    let mut state = PauliWalkState::origin(p.w);
    dst[state.z as usize] = pos.rotate(src[0]);
    for m in 1..len as u64 {
        let f = flip_word(m);
        state.advance(f, table[f as usize]);
        let phase = if state.s { neg } else { pos };
        dst[state.z as usize] = phase.rotate(src[state.x as usize]);
    }
    Ok(())
}

/// Per-entry reference: `out[x ^ w] = omega (-1)^popcount(u & x) psi[x]`.
pub fn apply_pauli_naive(psi: &DenseState, p: &PauliOp) -> Result<DenseState> {
    check_dims(psi, p)?;
    let mut out = zeroed(psi.amps.len())?;
    for (x, &a) in psi.amps.iter().enumerate() {
        let x = x as BitWord;
        let sign = Phase::sign(words::dot(p.u, x));
        out[(x ^ p.w) as usize] = (p.phase + sign).rotate(a);
    }
    Ok(DenseState {
        n: psi.n,
        amps: out,
    })
}

/// Dense `2^n x 2^n` matrix of `p`.
pub fn pauli_dense(p: &PauliOp) -> Result<DenseMatrix> {
    pauli_dense_with(p, &Limits::default())
}

pub fn pauli_dense_with(p: &PauliOp, limits: &Limits) -> Result<DenseMatrix> {
    limits.check_oracle("dense Pauli matrix", p.n)?;
    let mut m = DenseMatrix::zeros(p.n)?;
    for x in 0..1u64 << p.n {
        let value = (p.phase + Phase::sign(words::dot(p.u, x))).to_complex();
        m.set((x ^ p.w) as usize, x as usize, value);
    }
    Ok(m)
}
