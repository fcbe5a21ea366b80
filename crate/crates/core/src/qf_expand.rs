//! Quadratic form to dense state vector in `O(2^n)`.
//!
//! The phase exponent is split as `phi(y) = sum a_t y_t + 2 sum_{i<j} B_ij y_i y_j`
//! (mod 4) with `a_t = d_t + 2 J_tt` and `B` the symmetrized off-diagonal
//! part of `J`. Walking `y` in Gray order, flipping coordinate `t` changes the
//! exponent by `+-a_t + 2 (B y)_t`. The walk keeps the whole parity word
//! `p = B y` in one register and updates it with a single XOR of column `t`
//! of `B`, so every step is a constant number of word operations.

use std::ops::Range;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{zeroed, DenseState, Phase, QuadraticForm};
use crate::words::{self, flip_index, flip_word, gray, BitWord};
use crate::{FlipLookup, Limits};

/// Linear coefficients `a_t` and the symmetric zero-diagonal interaction matrix `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interaction {
    /// `a_t = d_t + 2 J_tt` in Z_4.
    pub linear: Vec<Phase>,
    /// Column `t` of `B`; also row `t`, since `B` is symmetric.
    pub columns: Vec<BitWord>,
}

impl Interaction {
    pub fn k(&self) -> usize {
        self.linear.len()
    }

    /// `B y` over GF(2).
    pub fn parity(&self, y: BitWord) -> BitWord {
        self.columns
            .iter()
            .enumerate()
            .filter(|(t, _)| (y >> t) & 1 == 1)
            .fold(0, |p, (_, &c)| p ^ c)
    }

    /// `phi(y)` evaluated from scratch.
    pub fn phase(&self, y: BitWord) -> Phase {
        let mut q = Phase::ONE;
        for (t, (&a, &c)) in self.linear.iter().zip(&self.columns).enumerate() {
            if (y >> t) & 1 == 1 {
                q = q + a;
                // Each pair i < j counted once, from its smaller index.
                let above = c & y & !words::low_mask(t + 1);
                q = q + Phase::sign(above.count_ones() & 1 == 1);
            }
        }
        q
    }
}

/// Builds `a` and `B` from `d` and `J`.
pub fn build_interaction(qf: &QuadraticForm) -> Interaction {
    let k = qf.k();
    let mut linear = Vec::with_capacity(k);
    let mut columns = vec![0; k];
    for t in 0..k {
        let d = (qf.linear >> t) & 1;
        let jtt = (qf.quadratic[t] >> t) & 1;
        linear.push(Phase::new((d + 2 * jtt) as u32));
        let upper = qf.quadratic[t] & !words::low_mask(t + 1);
        columns[t] |= upper;
        for j in t + 1..k {
            if (upper >> j) & 1 == 1 {
                columns[j] |= 1 << t;
            }
        }
    }
    Interaction { linear, columns }
}

/// Registers of the Gray walk: `y`, `x = h ^ sum y_t v_t`, `p = B y`, `q = phi(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkState {
    pub y: BitWord,
    pub x: BitWord,
    pub p: BitWord,
    pub q: Phase,
}

impl WalkState {
    pub fn origin(shift: BitWord) -> WalkState {
        WalkState {
            y: 0,
            x: shift,
            p: 0,
            q: Phase::ONE,
        }
    }

    /// State after `m` Gray steps, computed directly from the closed forms.
    pub fn at_step(qf: &QuadraticForm, inter: &Interaction, m: u64) -> WalkState {
        let y = gray(m);
        let x = qf
            .basis
            .iter()
            .enumerate()
            .filter(|(t, _)| (y >> t) & 1 == 1)
            .fold(qf.shift, |x, (_, &v)| x ^ v);
        WalkState {
            y,
            x,
            p: inter.parity(y),
            q: inter.phase(y),
        }
    }

    /// One Gray step flipping the one-hot coordinate `f` with data `(a_t, v_t, c_t)`.
    #[inline(always)]
    pub fn advance(&mut self, f: BitWord, a: Phase, v: BitWord, c: BitWord) {
        let linear = if self.y & f == 0 { a } else { -a };
        self.q = self.q + linear + Phase::sign(self.p & f != 0);
        self.y ^= f;
        self.x ^= v;
        self.p ^= c;
    }
}

/// Per-coordinate data indexed either by coordinate or by one-hot flip word.
struct FlipTables {
    mode: FlipLookup,
    linear: Vec<Phase>,
    basis: Vec<BitWord>,
    columns: Vec<BitWord>,
}

impl FlipTables {
    fn new(qf: &QuadraticForm, inter: &Interaction, mode: FlipLookup) -> Result<FlipTables> {
        let k = qf.k();
        match mode {
            FlipLookup::TrailingZeros => Ok(FlipTables {
                mode,
                linear: inter.linear.clone(),
                basis: qf.basis.clone(),
                columns: inter.columns.clone(),
            }),
            FlipLookup::OneHot => {
                let len = 1usize << k;
                let mut linear = Vec::new();
                let mut basis = Vec::new();
                let mut columns = Vec::new();
                for table in [&mut basis, &mut columns] {
                    table
                        .try_reserve_exact(len)
                        .map_err(|_| Error::Allocation(len))?;
                    table.resize(len, 0);
                }
                linear
                    .try_reserve_exact(len)
                    .map_err(|_| Error::Allocation(len))?;
                linear.resize(len, Phase::ONE);
                for t in 0..k {
                    linear[1 << t] = inter.linear[t];
                    basis[1 << t] = qf.basis[t];
                    columns[1 << t] = inter.columns[t];
                }
                Ok(FlipTables {
                    mode,
                    linear,
                    basis,
                    columns,
                })
            }
        }
    }

    #[inline(always)]
    fn step(&self, state: &mut WalkState, m: u64) {
        let f = flip_word(m);
        let i = match self.mode {
            FlipLookup::TrailingZeros => flip_index(m),
            FlipLookup::OneHot => f as usize,
        };
        state.advance(f, self.linear[i], self.basis[i], self.columns[i]);
    }

    /// Runs steps `range` from `state`, calling `emit` after each one.
    #[inline(always)]
    fn walk(&self, state: &mut WalkState, range: Range<u64>, mut emit: impl FnMut(&WalkState)) {
        // Monomorphize the loop per lookup mode.
        match self.mode {
            FlipLookup::TrailingZeros => {
                for m in range {
                    let t = flip_index(m);
                    state.advance(1 << t, self.linear[t], self.basis[t], self.columns[t]);
                    emit(state);
                }
            }
            FlipLookup::OneHot => {
                for m in range {
                    let f = flip_word(m);
                    let i = f as usize;
                    state.advance(f, self.linear[i], self.basis[i], self.columns[i]);
                    emit(state);
                }
            }
        }
    }
}

/// Expands `qf` into its dense state vector with default limits.
pub fn expand(qf: &QuadraticForm) -> Result<DenseState> {
    expand_with(qf, &Limits::default(), FlipLookup::default())
}

pub fn expand_with(qf: &QuadraticForm, limits: &Limits, lookup: FlipLookup) -> Result<DenseState> {
    qf.validate()?;
    limits.check_state("state vector", qf.n)?;
    let mut amps = zeroed(1 << qf.n)?;
    write_amplitudes(qf, lookup, &mut amps)?;
    Ok(DenseState { n: qf.n, amps })
}

/// Expands `qf` into a caller-owned buffer of length `2^n`, zero-filling it first.
pub fn expand_into(qf: &QuadraticForm, lookup: FlipLookup, out: &mut [Complex64]) -> Result<()> {
    qf.validate()?;
    if out.len() != 1 << qf.n {
        return Err(Error::DimensionMismatch {
            expected: qf.n,
            found: out.len().trailing_zeros() as usize,
        });
    }
    out.fill(Complex64::new(0.0, 0.0));
    write_amplitudes(qf, lookup, out)
}

fn write_amplitudes(qf: &QuadraticForm, lookup: FlipLookup, out: &mut [Complex64]) -> Result<()> {
    let values = Phase::table(qf.gamma);
    let mut state = WalkState::origin(qf.shift);
    out[state.x as usize] = values[0];
    let k = qf.k();
    if k == 0 {
        return Ok(());
    }
    let inter = build_interaction(qf);
    let tables = FlipTables::new(qf, &inter, lookup)?;
    tables.walk(&mut state, 1..1u64 << k, |s| {
        out[s.x as usize] = values[s.q.exponent() as usize];
    });
    Ok(())
}

/// Reference expansion evaluating every support point independently.
///
/// Costs `O(k^2)` per point; used to cross-check [`expand`].
pub fn expand_naive(qf: &QuadraticForm) -> Result<DenseState> {
    expand_naive_with(qf, &Limits::default())
}

pub fn expand_naive_with(qf: &QuadraticForm, limits: &Limits) -> Result<DenseState> {
    qf.validate()?;
    limits.check_state("state vector", qf.n)?;
    let mut amps = zeroed(1 << qf.n)?;
    naive_into(qf, &mut amps);
    Ok(DenseState { n: qf.n, amps })
}

pub(crate) fn naive_into(qf: &QuadraticForm, out: &mut [Complex64]) {
    out.fill(Complex64::new(0.0, 0.0));
    let k = qf.k();
    for y in 0..1u64 << k {
        let mut x = qf.shift;
        let mut exponent = 0u32;
        for i in 0..k {
            if (y >> i) & 1 == 0 {
                continue;
            }
            x ^= qf.basis[i];
            exponent += ((qf.linear >> i) & 1) as u32;
            for j in i..k {
                if (y >> j) & 1 == 1 && qf.j(i, j) {
                    exponent += 2;
                }
            }
        }
        out[x as usize] = Phase::new(exponent).rotate(qf.gamma);
    }
}

/// The `(x, q)` pairs written by the Gray walk, before scaling by `gamma`.
///
/// Yields exactly `2^k` pairs in walk order; `out[x] = gamma * i^q`.
pub fn expand_exact(qf: &QuadraticForm) -> Result<PhaseWalk> {
    qf.validate()?;
    PhaseWalk::new(qf, FlipLookup::default())
}

/// Step-by-step Gray walk exposing its registers.
pub struct PhaseWalk {
    tables: FlipTables,
    state: WalkState,
    next_step: u64,
    end: u64,
}

impl PhaseWalk {
    pub fn new(qf: &QuadraticForm, lookup: FlipLookup) -> Result<PhaseWalk> {
        qf.validate()?;
        let inter = build_interaction(qf);
        Ok(PhaseWalk {
            tables: FlipTables::new(qf, &inter, lookup)?,
            state: WalkState::origin(qf.shift),
            next_step: 0,
            end: 1 << qf.k(),
        })
    }

    /// Registers after the most recent write (the origin before the first call to `next`).
    pub fn state(&self) -> WalkState {
        self.state
    }

    /// Number of writes emitted so far.
    pub fn position(&self) -> u64 {
        self.next_step
    }
}

impl Iterator for PhaseWalk {
    type Item = (BitWord, Phase);

    fn next(&mut self) -> Option<(BitWord, Phase)> {
        if self.next_step == self.end {
            return None;
        }
        if self.next_step > 0 {
            self.tables.step(&mut self.state, self.next_step);
        }
        self.next_step += 1;
        Some((self.state.x, self.state.q))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next_step) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for PhaseWalk {}
