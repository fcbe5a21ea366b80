//! Seeded random instances for tests and benchmarks.
//!
//! Tableaux come from random words over `H`, `S`, `CNOT`, composed by
//! conjugating each image Pauli gate by gate. Check matrices are the
//! Z-images of such tableaux.

use num_complex::Complex64;
use rand::Rng;

use crate::model::{CheckMatrix, CliffordTableau, DenseState, PauliOp, Phase, QuadraticForm};
use crate::words::{self, BitWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    S(usize),
    Cnot(usize, usize),
}

/// `G P G^dag` for a single gate.
pub fn conjugate(p: &PauliOp, gate: Gate) -> PauliOp {
    let mut out = *p;
    match gate {
        Gate::H(q) => {
            let (a, b) = ((p.w >> q) & 1, (p.u >> q) & 1);
            // X^a Z^b -> Z^a X^b = (-1)^(ab) X^b Z^a
            out.w = (p.w & !(1 << q)) | (b << q);
            out.u = (p.u & !(1 << q)) | (a << q);
            out.phase = p.phase + Phase::sign(a & b == 1);
        }
        Gate::S(q) => {
            // X -> iXZ, Z -> Z
            let a = (p.w >> q) & 1;
            out.u ^= a << q;
            out.phase = p.phase + Phase::new(a as u32);
        }
        Gate::Cnot(c, t) => {
            out.w ^= ((p.w >> c) & 1) << t;
            out.u ^= ((p.u >> t) & 1) << c;
        }
    }
    out
}

/// Tableau of `gate * C`, given the tableau of `C`.
pub fn apply_gate(tab: &mut CliffordTableau, gate: Gate) {
    for p in tab.z_images.iter_mut().chain(tab.x_images.iter_mut()) {
        *p = conjugate(p, gate);
    }
}

pub fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    let choices = if n > 1 { 3 } else { 2 };
    match rng.gen_range(0..choices) {
        0 => Gate::H(rng.gen_range(0..n)),
        1 => Gate::S(rng.gen_range(0..n)),
        _ => {
            let c = rng.gen_range(0..n);
            let mut t = rng.gen_range(0..n - 1);
            if t >= c {
                t += 1;
            }
            Gate::Cnot(c, t)
        }
    }
}

pub fn random_gate_word<R: Rng>(n: usize, len: usize, rng: &mut R) -> Vec<Gate> {
    (0..len).map(|_| random_gate(n, rng)).collect()
}

/// Tableau of the product of a random gate word of length `10 n`.
pub fn random_tableau<R: Rng>(n: usize, rng: &mut R) -> CliffordTableau {
    let mut tab = CliffordTableau::identity(n);
    for gate in random_gate_word(n, 10 * n, rng) {
        apply_gate(&mut tab, gate);
    }
    tab
}

/// A valid check matrix: `{Z_t}` conjugated by a random Clifford, with random
/// generator signs.
pub fn random_check_matrix<R: Rng>(n: usize, rng: &mut R) -> CheckMatrix {
    let tab = random_tableau(n, rng);
    let rows = tab
        .z_images
        .iter()
        .map(|p| {
            let mut row = p.to_check_row().expect("conjugated Z_t is Hermitian");
            row.sigma ^= rng.gen::<bool>();
            row
        })
        .collect();
    CheckMatrix::new(n, rows)
}

/// Random independent words, drawn by rejection and put in reduced row echelon form.
pub fn random_basis<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<BitWord> {
    assert!(k <= n);
    let mask = words::low_mask(n);
    let mut basis = Vec::with_capacity(k);
    while basis.len() < k {
        let v = rng.gen::<u64>() & mask;
        basis.push(v);
        if words::rank(&basis) < basis.len() {
            basis.pop();
        }
    }
    reduced_echelon(basis)
}

/// Reduced row echelon form with ascending pivot coordinates (pivot = lowest set bit).
pub fn reduced_echelon(mut rows: Vec<BitWord>) -> Vec<BitWord> {
    let mut rank = 0;
    for col in 0..words::WORD_BITS {
        let Some(r) = (rank..rows.len()).find(|&r| (rows[r] >> col) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, r);
        let pivot = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && (*row >> col) & 1 == 1 {
                *row ^= pivot;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows
}

/// Uniform random quadratic form with support dimension `k` and `gamma = 2^(-k/2)`.
pub fn random_qf<R: Rng>(n: usize, k: usize, rng: &mut R) -> QuadraticForm {
    let basis = random_basis(n, k, rng);
    let quadratic = (0..k)
        .map(|t| rng.gen::<u64>() & words::low_mask(k) & !words::low_mask(t))
        .collect();
    QuadraticForm {
        n,
        shift: rng.gen::<u64>() & words::low_mask(n),
        basis,
        linear: rng.gen::<u64>() & words::low_mask(k),
        quadratic,
        gamma: QuadraticForm::normalizing_gamma(k),
    }
}

/// Uniform random Pauli operator.
pub fn random_pauli<R: Rng>(n: usize, rng: &mut R) -> PauliOp {
    let mask = words::low_mask(n);
    PauliOp::new(
        n,
        Phase::new(rng.gen_range(0..4)),
        rng.gen::<u64>() & mask,
        rng.gen::<u64>() & mask,
    )
}

/// Random state with entries uniform in the unit square (not normalized).
pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> DenseState {
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    DenseState::new(n, amps)
}
