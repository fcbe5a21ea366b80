//! Word-level bit utilities and the binary reflected Gray code.
//!
//! Every vector over GF(2) used by the library (basis labels, support
//! words, parity words, Pauli patterns) lives in a single [`BitWord`].
//! Coordinate `t` (1-based) is stored at bit position `t - 1`, so coordinate
//! 1 is the least significant bit.

/// A vector over GF(2) packed into one machine word, coordinate 1 at the LSB.
pub type BitWord = u64;

/// Number of bits in a [`BitWord`].
pub const WORD_BITS: usize = BitWord::BITS as usize;

/// Largest qubit count (or support dimension) whose basis labels and loop
/// counters `0..2^n` still fit in one word.
pub const MAX_WORD_QUBITS: usize = WORD_BITS - 1;

/// Binary reflected Gray code `m ^ (m >> 1)`.
#[inline(always)]
pub fn gray(m: u64) -> BitWord {
    m ^ (m >> 1)
}

/// One-hot word of the bit flipped between `gray(m - 1)` and `gray(m)`.
///
/// Equals `m & -m` in two's complement. `m` must be nonzero.
#[inline(always)]
pub fn flip_word(m: u64) -> BitWord {
    debug_assert!(m != 0, "flip_word(0) is undefined");
    m & m.wrapping_neg()
}

/// Zero-based index of the coordinate flipped at Gray step `m`.
#[inline(always)]
pub fn flip_index(m: u64) -> usize {
    m.trailing_zeros() as usize
}

/// Mask with the low `n` bits set.
#[inline]
pub fn low_mask(n: usize) -> BitWord {
    if n >= WORD_BITS {
        BitWord::MAX
    } else {
        (1 << n) - 1
    }
}

/// Parity of the inner product `a . b` over GF(2).
#[inline(always)]
pub fn dot(a: BitWord, b: BitWord) -> bool {
    (a & b).count_ones() & 1 == 1
}

/// Symplectic inner product `w1 . u2 + u1 . w2` of two Pauli patterns.
#[inline]
pub fn symplectic(w1: BitWord, u1: BitWord, w2: BitWord, u2: BitWord) -> bool {
    dot(w1, u2) ^ dot(u1, w2)
}

/// Rank over GF(2) of a set of words, each a row vector.
pub fn rank(rows: &[BitWord]) -> usize {
    let mut basis: Vec<BitWord> = Vec::with_capacity(rows.len());
    for &row in rows {
        let mut r = row;
        for &b in &basis {
            // Each basis element is keyed by its highest set bit.
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Rank over GF(2) of rows spanning `2n` columns, stored as `(low, high)` halves.
pub fn rank_pairs(rows: &[(BitWord, BitWord)]) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for col in 0..2 * WORD_BITS {
        let bit = |r: &(BitWord, BitWord)| {
            if col < WORD_BITS {
                (r.0 >> col) & 1 == 1
            } else {
                (r.1 >> (col - WORD_BITS)) & 1 == 1
            }
        };
        let Some(pivot) = (rank..rows.len()).find(|&i| bit(&rows[i])) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && bit(r) {
                r.0 ^= p.0;
                r.1 ^= p.1;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Renders the low `len` bits with coordinate 1 as the leftmost character.
pub fn to_bitstring(word: BitWord, len: usize) -> String {
    (0..len)
        .map(|i| if (word >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses a string of `0`/`1` characters, coordinate 1 leftmost.
///
/// Returns `None` on any other character or when the string is longer than a word.
pub fn from_bitstring(s: &str) -> Option<BitWord> {
    if s.len() > WORD_BITS {
        return None;
    }
    let mut word = 0;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => word |= 1 << i,
            _ => return None,
        }
    }
    Some(word)
}

/// Iterator over the Gray sequence `gray(0), gray(1), ..., gray(2^k - 1)`.
#[derive(Debug, Clone)]
pub struct GraySequence {
    next: u64,
    end: u64,
}

impl GraySequence {
    pub fn new(k: usize) -> Self {
        assert!(
            k <= MAX_WORD_QUBITS,
            "Gray sequence over {k} bits does not fit a word"
        );
        GraySequence {
            next: 0,
            end: 1 << k,
        }
    }
}

impl Iterator for GraySequence {
    type Item = BitWord;

    fn next(&mut self) -> Option<BitWord> {
        if self.next == self.end {
            return None;
        }
        let g = gray(self.next);
        self.next += 1;
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for GraySequence {}
