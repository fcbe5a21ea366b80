//! Helpers shared by the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stabmat::instances::Gate;
use stabmat::{DenseMatrix, DenseState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Bit patterns of the entries, so `-0.0` and `0.0` are told apart.
pub fn bits(values: &[Complex64]) -> Vec<(u64, u64)> {
    values
        .iter()
        .map(|z| (z.re.to_bits(), z.im.to_bits()))
        .collect()
}

pub fn same_bits(a: &DenseState, b: &DenseState) -> bool {
    a.n == b.n && bits(&a.amps) == bits(&b.amps)
}

/// Dense matrix of a single gate on `n` qubits (qubit `q` is bit `q`).
pub fn gate_matrix(n: usize, gate: Gate) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for x in 0..1usize << n {
        match gate {
            Gate::H(q) => {
                let flipped = x ^ (1 << q);
                let sign = if (x >> q) & 1 == 1 { -r } else { r };
                m.set(x, x, c(sign, 0.0));
                m.set(flipped, x, c(r, 0.0));
            }
            Gate::S(q) => {
                let value = if (x >> q) & 1 == 1 {
                    c(0.0, 1.0)
                } else {
                    c(1.0, 0.0)
                };
                m.set(x, x, value);
            }
            Gate::Cnot(ctl, tgt) => {
                m.set(x ^ (((x >> ctl) & 1) << tgt), x, c(1.0, 0.0));
            }
        }
    }
    m
}

/// `G_L ... G_1` for the word `G_1 .. G_L`.
pub fn word_matrix(n: usize, word: &[Gate]) -> DenseMatrix {
    word.iter().fold(DenseMatrix::identity(n), |acc, &g| {
        gate_matrix(n, g).matmul(&acc)
    })
}

/// `min over |lambda| = 1` of `max |a - lambda b|`, with `lambda` taken at the
/// largest entry of `b`.
pub fn diff_up_to_phase(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    assert_eq!(a.entries.len(), b.entries.len());
    let (idx, _) = b.entries.iter().enumerate().fold((0, 0.0), |best, (i, z)| {
        if z.norm() > best.1 {
            (i, z.norm())
        } else {
            best
        }
    });
    let ratio = a.entries[idx] / b.entries[idx];
    let lambda = ratio / ratio.norm();
    let scaled = DenseMatrix::new(b.n, b.entries.iter().map(|z| z * lambda).collect());
    a.max_diff(&scaled).max((ratio.norm() - 1.0).abs())
}
