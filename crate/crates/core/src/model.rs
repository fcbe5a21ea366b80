//! Compact and dense representations, with validation.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result, ValidationError};
use crate::words::{self, BitWord, MAX_WORD_QUBITS};

/// An element of Z_4 standing for the phase `i^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn new(q: u32) -> Phase {
        Phase((q & 3) as u8)
    }

    /// `(-1)^bit`.
    pub fn sign(bit: bool) -> Phase {
        Phase((bit as u8) << 1)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 & 1 == 0
    }

    /// Multiplies `z` by `i^q` using only component swaps and negations.
    #[inline(always)]
    pub fn rotate(self, z: Complex64) -> Complex64 {
        match self.0 {
            0 => z,
            1 => Complex64::new(-z.im, z.re),
            2 => Complex64::new(-z.re, -z.im),
            _ => Complex64::new(z.im, -z.re),
        }
    }

    /// The four values `z, iz, -z, -iz`, indexed by exponent.
    #[inline]
    pub fn table(z: Complex64) -> [Complex64; 4] {
        [
            z,
            Phase::I.rotate(z),
            Phase::MINUS_ONE.rotate(z),
            Phase::MINUS_I.rotate(z),
        ]
    }

    pub fn to_complex(self) -> Complex64 {
        self.rotate(Complex64::new(1.0, 0.0))
    }
}

impl Add for Phase {
    type Output = Phase;
    #[inline(always)]
    fn add(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) & 3)
    }
}

impl Sub for Phase {
    type Output = Phase;
    #[inline(always)]
    fn sub(self, rhs: Phase) -> Phase {
        Phase((self.0 + 4 - rhs.0) & 3)
    }
}

impl Neg for Phase {
    type Output = Phase;
    #[inline(always)]
    fn neg(self) -> Phase {
        Phase((4 - self.0) & 3)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.0 as usize])
    }
}

fn check_word_width(n: usize) -> Result<(), ValidationError> {
    if n > MAX_WORD_QUBITS {
        return Err(ValidationError::ShapeMismatch(format!(
            "n = {n} exceeds the word width limit of {MAX_WORD_QUBITS}"
        )));
    }
    Ok(())
}

fn check_fits(name: &str, word: BitWord, bits: usize) -> Result<(), ValidationError> {
    if word & !words::low_mask(bits) != 0 {
        return Err(ValidationError::ShapeMismatch(format!(
            "{name} has bits set above position {bits}"
        )));
    }
    Ok(())
}

/// Quadratic-form description of a stabilizer state.
///
/// The amplitude at `shift ^ (XOR of basis[t] over set bits t of y)` is
/// `gamma * i^(linear . y) * (-1)^(y^T J y)` for every `y` in GF(2)^k, and
/// zero off that affine support. Row `t` of `J` is `quadratic[t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    pub n: usize,
    /// `h`, the support offset.
    pub shift: BitWord,
    /// `v_1..v_k`, linearly independent.
    pub basis: Vec<BitWord>,
    /// `d`, k bits.
    pub linear: BitWord,
    /// Rows of the upper-triangular matrix `J`, k bits each.
    pub quadratic: Vec<BitWord>,
    pub gamma: Complex64,
}

impl QuadraticForm {
    /// Support dimension.
    pub fn k(&self) -> usize {
        self.basis.len()
    }

    /// The normalizing scalar `2^(-k/2)`.
    pub fn normalizing_gamma(k: usize) -> Complex64 {
        Complex64::new((0.5f64).powf(k as f64 / 2.0), 0.0)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let (n, k) = (self.n, self.k());
        check_word_width(n)?;
        if k > n {
            return Err(ValidationError::ShapeMismatch(format!(
                "support dimension k = {k} exceeds n = {n}"
            )));
        }
        if self.quadratic.len() != k {
            return Err(ValidationError::ShapeMismatch(format!(
                "J has {} rows, expected k = {k}",
                self.quadratic.len()
            )));
        }
        check_fits("h", self.shift, n)?;
        for (t, &v) in self.basis.iter().enumerate() {
            check_fits(&format!("v_{}", t + 1), v, n)?;
        }
        check_fits("d", self.linear, k)?;
        for (t, &row) in self.quadratic.iter().enumerate() {
            // Row t may only use columns t..k.
            let allowed = words::low_mask(k) & !words::low_mask(t);
            if row & !allowed != 0 {
                return Err(ValidationError::ShapeMismatch(format!(
                    "J row {} is not upper triangular",
                    t + 1
                )));
            }
        }
        let rank = words::rank(&self.basis);
        if rank < k {
            return Err(ValidationError::DependentBasis { rank, k });
        }
        if self.gamma == Complex64::new(0.0, 0.0) {
            return Err(ValidationError::ZeroGamma);
        }
        Ok(())
    }

    /// Bit `J[i][j]`, zero-based.
    pub fn j(&self, i: usize, j: usize) -> bool {
        (self.quadratic[i] >> j) & 1 == 1
    }
}

/// A Pauli operator `i^phase X(w) Z(u)` on `n` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliOp {
    pub n: usize,
    pub phase: Phase,
    /// X-pattern.
    pub w: BitWord,
    /// Z-pattern.
    pub u: BitWord,
}

impl PauliOp {
    pub fn new(n: usize, phase: Phase, w: BitWord, u: BitWord) -> PauliOp {
        PauliOp { n, phase, w, u }
    }

    pub fn identity(n: usize) -> PauliOp {
        PauliOp::new(n, Phase::ONE, 0, 0)
    }

    /// `Z` on qubit `q` (zero-based).
    pub fn z(n: usize, q: usize) -> PauliOp {
        PauliOp::new(n, Phase::ONE, 0, 1 << q)
    }

    /// `X` on qubit `q` (zero-based).
    pub fn x(n: usize, q: usize) -> PauliOp {
        PauliOp::new(n, Phase::ONE, 1 << q, 0)
    }

    /// Phase `i^popcount(w & u)` contributed by writing each `XZ` factor as `-iY`.
    pub fn y_count(&self) -> Phase {
        Phase::new((self.w & self.u).count_ones())
    }

    /// `omega X(w) Z(u)` is Hermitian iff `omega^2 (-1)^(w.u) = 1`.
    pub fn is_hermitian(&self) -> bool {
        (self.phase + self.phase + Phase::sign(words::dot(self.w, self.u))) == Phase::ONE
    }

    pub fn commutes_with(&self, other: &PauliOp) -> bool {
        !words::symplectic(self.w, self.u, other.w, other.u)
    }

    /// Operator product `self * other`.
    pub fn mul(&self, other: &PauliOp) -> PauliOp {
        // Z(u1) X(w2) = (-1)^(u1.w2) X(w2) Z(u1)
        let phase = self.phase + other.phase + Phase::sign(words::dot(self.u, other.w));
        PauliOp::new(self.n, phase, self.w ^ other.w, self.u ^ other.u)
    }

    /// Converts a Hermitian operator to signed letter form. `None` if not Hermitian.
    pub fn to_check_row(&self) -> Option<CheckRow> {
        let rest = self.phase - self.y_count();
        match rest {
            Phase::ONE => Some(CheckRow::new(self.w, self.u, false)),
            Phase::MINUS_ONE => Some(CheckRow::new(self.w, self.u, true)),
            _ => None,
        }
    }
}

impl fmt::Display for PauliOp {
    /// Letter form: phase prefix relative to the tensor product of `I, X, Y, Z`,
    /// then one letter per qubit, qubit 1 leftmost.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase - self.y_count())?;
        for q in 0..self.n {
            let letter = match ((self.w >> q) & 1, (self.u >> q) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            };
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

/// One signed generator `(-1)^sigma * tensor_j P(w_j, u_j)` with `P(1,1) = Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CheckRow {
    pub w: BitWord,
    pub u: BitWord,
    pub sigma: bool,
}

impl CheckRow {
    pub fn new(w: BitWord, u: BitWord, sigma: bool) -> CheckRow {
        CheckRow { w, u, sigma }
    }

    /// The generator as `omega X(w) Z(u)`, where `omega = (-1)^sigma i^popcount(w & u)`
    /// because `Y = iXZ`.
    pub fn to_pauli(&self, n: usize) -> PauliOp {
        let y = Phase::new((self.w & self.u).count_ones());
        PauliOp::new(n, Phase::sign(self.sigma) + y, self.w, self.u)
    }
}

/// Stabilizer check matrix: `n` signed generators over `n` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckMatrix {
    pub n: usize,
    pub rows: Vec<CheckRow>,
}

impl CheckMatrix {
    pub fn new(n: usize, rows: Vec<CheckRow>) -> CheckMatrix {
        CheckMatrix { n, rows }
    }

    /// The computational-basis stabilizers `Z_1..Z_n`.
    pub fn z_basis(n: usize) -> CheckMatrix {
        CheckMatrix::new(n, (0..n).map(|t| CheckRow::new(0, 1 << t, false)).collect())
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let n = self.n;
        check_word_width(n)?;
        if n == 0 {
            return Err(ValidationError::ShapeMismatch("n must be positive".into()));
        }
        if self.rows.len() != n {
            return Err(ValidationError::WrongRowCount {
                expected: n,
                found: self.rows.len(),
            });
        }
        for (r, row) in self.rows.iter().enumerate() {
            check_fits(&format!("row {} X-pattern", r + 1), row.w, n)?;
            check_fits(&format!("row {} Z-pattern", r + 1), row.u, n)?;
        }
        for (r, a) in self.rows.iter().enumerate() {
            for (s, b) in self.rows.iter().enumerate().skip(r + 1) {
                if words::symplectic(a.w, a.u, b.w, b.u) {
                    return Err(ValidationError::NonCommutingRows(r + 1, s + 1));
                }
            }
        }
        let pairs: Vec<_> = self.rows.iter().map(|r| (r.w, r.u)).collect();
        if words::rank_pairs(&pairs) < n {
            return Err(ValidationError::DependentRows);
        }
        Ok(())
    }

    pub fn paulis(&self) -> impl Iterator<Item = PauliOp> + '_ {
        self.rows.iter().map(move |r| r.to_pauli(self.n))
    }
}

/// Clifford tableau: images `U_t = C Z_t C^dag` and `V_t = C X_t C^dag`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordTableau {
    pub n: usize,
    /// `U_1..U_n`.
    pub z_images: Vec<PauliOp>,
    /// `V_1..V_n`.
    pub x_images: Vec<PauliOp>,
}

impl CliffordTableau {
    pub fn new(n: usize, z_images: Vec<PauliOp>, x_images: Vec<PauliOp>) -> CliffordTableau {
        CliffordTableau {
            n,
            z_images,
            x_images,
        }
    }

    pub fn identity(n: usize) -> CliffordTableau {
        CliffordTableau::new(
            n,
            (0..n).map(|q| PauliOp::z(n, q)).collect(),
            (0..n).map(|q| PauliOp::x(n, q)).collect(),
        )
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let n = self.n;
        check_word_width(n)?;
        if self.z_images.len() != n || self.x_images.len() != n {
            return Err(ValidationError::ShapeMismatch(format!(
                "tableau on {n} qubits has {} Z-images and {} X-images",
                self.z_images.len(),
                self.x_images.len()
            )));
        }
        for p in self.z_images.iter().chain(&self.x_images) {
            if p.n != n {
                return Err(ValidationError::ShapeMismatch(format!(
                    "tableau entry on {} qubits, expected {n}",
                    p.n
                )));
            }
            check_fits("tableau X-pattern", p.w, n)?;
            check_fits("tableau Z-pattern", p.u, n)?;
        }
        for t in 0..n {
            if !self.z_images[t].is_hermitian() || !self.x_images[t].is_hermitian() {
                return Err(ValidationError::NotHermitian(t + 1));
            }
        }
        for t in 0..n {
            for s in 0..n {
                let (ut, vs) = (&self.z_images[t], &self.x_images[s]);
                if ut.commutes_with(vs) == (s == t) {
                    return Err(ValidationError::BadCommutation(t + 1, s + 1));
                }
                if s > t
                    && (!ut.commutes_with(&self.z_images[s])
                        || !self.x_images[t].commutes_with(&self.x_images[s]))
                {
                    return Err(ValidationError::BadCommutation(t + 1, s + 1));
                }
            }
        }
        Ok(())
    }
}

/// Allocates a zeroed buffer of `len` amplitudes, surfacing allocation failure.
pub(crate) fn zeroed(len: usize) -> Result<Vec<Complex64>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len)
        .map_err(|_| Error::Allocation(len))?;
    v.resize(len, Complex64::new(0.0, 0.0));
    Ok(v)
}

/// Dense state vector, amplitude `x` at index `x` (qubit 1 at the LSB).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl DenseState {
    pub fn new(n: usize, amps: Vec<Complex64>) -> DenseState {
        assert_eq!(
            amps.len(),
            1 << n,
            "state on {n} qubits needs 2^{n} amplitudes"
        );
        DenseState { n, amps }
    }

    pub fn zeros(n: usize) -> Result<DenseState> {
        Ok(DenseState {
            n,
            amps: zeroed(1 << n)?,
        })
    }

    /// Computational basis state `|x>`.
    pub fn basis(n: usize, x: BitWord) -> DenseState {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[x as usize] = Complex64::new(1.0, 0.0);
        DenseState { n, amps }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_diff(&self, other: &DenseState) -> f64 {
        max_abs_diff(&self.amps, &other.amps)
    }
}

/// Dense `2^n x 2^n` matrix stored column-major: column `x` is `C|x>`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub n: usize,
    pub entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> DenseMatrix {
        assert_eq!(
            entries.len(),
            1 << (2 * n),
            "matrix on {n} qubits needs 4^{n} entries"
        );
        DenseMatrix { n, entries }
    }

    pub fn zeros(n: usize) -> Result<DenseMatrix> {
        Ok(DenseMatrix {
            n,
            entries: zeroed(1 << (2 * n))?,
        })
    }

    pub fn identity(n: usize) -> DenseMatrix {
        let dim = 1 << n;
        let mut m = DenseMatrix {
            n,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        };
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[col * self.dim() + row]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        let dim = self.dim();
        self.entries[col * dim + row] = value;
    }

    pub fn column(&self, col: usize) -> &[Complex64] {
        let dim = self.dim();
        &self.entries[col * dim..(col + 1) * dim]
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            let dst = &mut out[col * dim..(col + 1) * dim];
            for (k, &b) in other.column(col).iter().enumerate() {
                if b == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (d, &a) in dst.iter_mut().zip(self.column(k)) {
                    *d += a * b;
                }
            }
        }
        DenseMatrix::new(self.n, out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> DenseMatrix {
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            for row in 0..dim {
                out[row * dim + col] = self.get(row, col).conj();
            }
        }
        DenseMatrix::new(self.n, out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_diff(&self, other: &DenseMatrix) -> f64 {
        max_abs_diff(&self.entries, &other.entries)
    }
}

pub(crate) fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
