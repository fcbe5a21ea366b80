//! Text formats for compact descriptions and text/binary encodings for dense outputs.
//!
//! Bitstrings and Pauli strings are written with coordinate (qubit) 1 as the
//! leftmost character; they are stored LSB-first internally. See `FORMATS.md`
//! at the repository root for the full grammar.

use std::fmt::Write as _;
use std::io::{self, Write};

use num_complex::Complex64;
use thiserror::Error;

use crate::error::ValidationError;
use crate::model::{
    CheckMatrix, CheckRow, CliffordTableau, DenseMatrix, DenseState, PauliOp, Phase, QuadraticForm,
};
use crate::words::{from_bitstring, to_bitstring, MAX_WORD_QUBITS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("bad phase token {0:?}")]
    BadPhaseToken(String),
    #[error("expected {expected} qubits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{0}")]
    Invalid(ValidationError),
}

/// A parse failure with its 1-based line number (0 when not tied to a line).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }
}

type ParseResult<T> = Result<T, ParseError>;

/// Non-blank lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_bits(line: usize, value: &str, len: usize, what: &str) -> ParseResult<u64> {
    if value.len() != len {
        return Err(ParseError::syntax(
            line,
            format!("{what} must have {len} bits, found {:?}", value),
        ));
    }
    from_bitstring(value)
        .ok_or_else(|| ParseError::syntax(line, format!("{what} is not a bitstring: {value:?}")))
}

fn parse_count(line: usize, value: &str, what: &str) -> ParseResult<usize> {
    let n: usize = value
        .parse()
        .map_err(|_| ParseError::syntax(line, format!("{what} must be a nonnegative integer")))?;
    if n > MAX_WORD_QUBITS {
        return Err(ParseError::syntax(
            line,
            format!("{what} = {n} exceeds {MAX_WORD_QUBITS}"),
        ));
    }
    Ok(n)
}

fn parse_f64(line: usize, s: &str) -> ParseResult<f64> {
    s.parse()
        .map_err(|_| ParseError::syntax(line, format!("not a number: {s:?}")))
}

/// Parses the line-oriented quadratic-form format and validates the result.
pub fn parse_qf(text: &str) -> ParseResult<QuadraticForm> {
    let mut lines = content_lines(text);
    let mut last_line = 0;
    let mut field = |key: &str| -> ParseResult<(usize, String)> {
        let Some((no, line)) = lines.next() else {
            return Err(ParseError::syntax(
                last_line + 1,
                format!("missing `{key}=` line"),
            ));
        };
        last_line = no;
        let Some((k, v)) = line.split_once('=') else {
            return Err(ParseError::syntax(no, format!("expected `{key}=...`")));
        };
        if k.trim() != key {
            return Err(ParseError::syntax(
                no,
                format!("expected `{key}=`, found `{}=`", k.trim()),
            ));
        }
        Ok((no, v.trim().to_string()))
    };

    let (no, v) = field("n")?;
    let n = parse_count(no, &v, "n")?;
    let (no, v) = field("k")?;
    let k = parse_count(no, &v, "k")?;
    let (no, v) = field("h")?;
    let shift = parse_bits(no, &v, n, "h")?;
    let mut basis = Vec::with_capacity(k);
    for _ in 0..k {
        let (no, v) = field("v")?;
        basis.push(parse_bits(no, &v, n, "v")?);
    }
    let (no, v) = field("d")?;
    let linear = parse_bits(no, &v, k, "d")?;
    let mut quadratic = Vec::with_capacity(k);
    for _ in 0..k {
        let (no, v) = field("J")?;
        quadratic.push(parse_bits(no, &v, k, "J row")?);
    }
    let (gamma_line, v) = field("gamma")?;
    let gamma = if v == "auto" {
        QuadraticForm::normalizing_gamma(k)
    } else {
        let parts: Vec<&str> = v.split_whitespace().collect();
        let [re, im] = parts[..] else {
            return Err(ParseError::syntax(
                gamma_line,
                "gamma must be `<re> <im>` or `auto`",
            ));
        };
        Complex64::new(parse_f64(gamma_line, re)?, parse_f64(gamma_line, im)?)
    };
    if let Some((no, _)) = lines.next() {
        return Err(ParseError::syntax(no, "trailing content after gamma"));
    }

    let qf = QuadraticForm {
        n,
        shift,
        basis,
        linear,
        quadratic,
        gamma,
    };
    qf.validate().map_err(|e| ParseError {
        line: gamma_line,
        kind: ParseErrorKind::Invalid(e),
    })?;
    Ok(qf)
}

pub fn serialize_qf(qf: &QuadraticForm) -> String {
    let k = qf.k();
    let mut out = String::new();
    let _ = writeln!(out, "n={}", qf.n);
    let _ = writeln!(out, "k={k}");
    let _ = writeln!(out, "h={}", to_bitstring(qf.shift, qf.n));
    for &v in &qf.basis {
        let _ = writeln!(out, "v={}", to_bitstring(v, qf.n));
    }
    let _ = writeln!(out, "d={}", to_bitstring(qf.linear, k));
    for &row in &qf.quadratic {
        let _ = writeln!(out, "J={}", to_bitstring(row, k));
    }
    if qf.gamma == QuadraticForm::normalizing_gamma(k) {
        out.push_str("gamma=auto\n");
    } else {
        let _ = writeln!(out, "gamma={:?} {:?}", qf.gamma.re, qf.gamma.im);
    }
    out
}

/// Parses `[+|-|+i|-i]` followed by letters `I X Y Z`, qubit 1 leftmost.
pub fn parse_pauli(s: &str) -> Result<PauliOp, ParseErrorKind> {
    let (prefix, letters) = match s.find(['I', 'X', 'Y', 'Z']) {
        Some(i) => s.split_at(i),
        None if s.starts_with(['+', '-']) && s.len() <= 2 => (s, ""),
        None => {
            return Err(ParseErrorKind::Syntax(format!("no Pauli letters in {s:?}")));
        }
    };
    let prefix_phase = match prefix {
        "" | "+" => Phase::ONE,
        "-" => Phase::MINUS_ONE,
        "+i" => Phase::I,
        "-i" => Phase::MINUS_I,
        other => return Err(ParseErrorKind::BadPhaseToken(other.to_string())),
    };
    let n = letters.chars().count();
    if n > MAX_WORD_QUBITS {
        return Err(ParseErrorKind::Syntax(format!(
            "{n} qubits exceed {MAX_WORD_QUBITS}"
        )));
    }
    let (mut w, mut u) = (0u64, 0u64);
    for (q, ch) in letters.chars().enumerate() {
        match ch {
            'I' => {}
            'X' => w |= 1 << q,
            'Z' => u |= 1 << q,
            'Y' => {
                w |= 1 << q;
                u |= 1 << q;
            }
            other => {
                return Err(ParseErrorKind::Syntax(format!(
                    "unexpected character {other:?}"
                )))
            }
        }
    }
    let p = PauliOp::new(n, Phase::ONE, w, u);
    Ok(PauliOp {
        phase: prefix_phase + p.y_count(),
        ..p
    })
}

fn pauli_line(no: usize, s: &str, n: Option<usize>) -> ParseResult<PauliOp> {
    let p = parse_pauli(s).map_err(|kind| ParseError { line: no, kind })?;
    if let Some(expected) = n {
        if p.n != expected {
            return Err(ParseError {
                line: no,
                kind: ParseErrorKind::LengthMismatch {
                    expected,
                    found: p.n,
                },
            });
        }
    }
    Ok(p)
}

/// One signed Pauli string per line. Only `+` and `-` prefixes are allowed.
/// The result is not validated.
pub fn parse_check(text: &str) -> ParseResult<CheckMatrix> {
    let mut n = None;
    let mut rows = Vec::new();
    for (no, line) in content_lines(text) {
        let p = pauli_line(no, line, n)?;
        n = Some(p.n);
        let row = p.to_check_row().ok_or_else(|| ParseError {
            line: no,
            kind: ParseErrorKind::BadPhaseToken(line.chars().take(2).collect()),
        })?;
        rows.push(row);
    }
    let Some(n) = n else {
        return Err(ParseError::syntax(0, "no generators"));
    };
    Ok(CheckMatrix::new(n, rows))
}

fn check_row_string(row: &CheckRow, n: usize) -> String {
    row.to_pauli(n).to_string()
}

pub fn serialize_check(cm: &CheckMatrix) -> String {
    cm.rows
        .iter()
        .map(|r| check_row_string(r, cm.n) + "\n")
        .collect()
}

/// Lines `U <pauli>` and `V <pauli>`; the `t`-th `U` line is the image of
/// `Z_t` and the `t`-th `V` line the image of `X_t`. The result is not validated.
pub fn parse_tableau(text: &str) -> ParseResult<CliffordTableau> {
    let mut n = None;
    let mut z_images = Vec::new();
    let mut x_images = Vec::new();
    let mut last = 0;
    for (no, line) in content_lines(text) {
        last = no;
        let (target, rest) = if let Some(rest) = line.strip_prefix('U') {
            (&mut z_images, rest)
        } else if let Some(rest) = line.strip_prefix('V') {
            (&mut x_images, rest)
        } else {
            return Err(ParseError::syntax(
                no,
                "tableau lines start with `U` or `V`",
            ));
        };
        let p = pauli_line(no, rest.trim(), n)?;
        n = Some(p.n);
        target.push(p);
    }
    let Some(n) = n else {
        return Err(ParseError::syntax(0, "empty tableau"));
    };
    if z_images.len() != n || x_images.len() != n {
        return Err(ParseError::syntax(
            last,
            format!(
                "{n}-qubit tableau needs {n} U and {n} V lines, found {} and {}",
                z_images.len(),
                x_images.len()
            ),
        ));
    }
    Ok(CliffordTableau::new(n, z_images, x_images))
}

pub fn serialize_tableau(tab: &CliffordTableau) -> String {
    let mut out = String::new();
    for p in &tab.z_images {
        let _ = writeln!(out, "U {p}");
    }
    for p in &tab.x_images {
        let _ = writeln!(out, "V {p}");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DenseFormat {
    Text,
    #[default]
    Binary,
}

pub const MAGIC: &[u8; 4] = b"STBM";
pub const FORMAT_VERSION: u8 = 1;
pub const HEADER_LEN: usize = 16;
const KIND_STATE: u8 = 0;
const KIND_MATRIX: u8 = 1;

/// A dense output read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub enum Dense {
    State(DenseState),
    Matrix(DenseMatrix),
}

fn header(kind: u8, n: usize) -> [u8; HEADER_LEN] {
    let mut h = [0u8; HEADER_LEN];
    h[..4].copy_from_slice(MAGIC);
    h[4] = FORMAT_VERSION;
    h[5] = kind;
    h[6..8].copy_from_slice(&(n as u16).to_le_bytes());
    h
}

fn write_values<W: Write>(out: &mut W, values: &[Complex64]) -> io::Result<()> {
    let mut buf = Vec::with_capacity(16 * 4096);
    for chunk in values.chunks(4096) {
        buf.clear();
        for z in chunk {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        out.write_all(&buf)?;
    }
    Ok(())
}

pub fn write_state<W: Write>(out: &mut W, psi: &DenseState, format: DenseFormat) -> io::Result<()> {
    match format {
        DenseFormat::Binary => {
            out.write_all(&header(KIND_STATE, psi.n))?;
            write_values(out, &psi.amps)
        }
        DenseFormat::Text => {
            for (i, z) in psi.amps.iter().enumerate() {
                writeln!(out, "{i} {:?} {:?}", z.re, z.im)?;
            }
            Ok(())
        }
    }
}

pub fn write_matrix<W: Write>(out: &mut W, m: &DenseMatrix, format: DenseFormat) -> io::Result<()> {
    match format {
        DenseFormat::Binary => {
            out.write_all(&header(KIND_MATRIX, m.n))?;
            write_values(out, &m.entries)
        }
        DenseFormat::Text => {
            let dim = m.dim();
            for (i, z) in m.entries.iter().enumerate() {
                writeln!(out, "{} {} {:?} {:?}", i / dim, i % dim, z.re, z.im)?;
            }
            Ok(())
        }
    }
}

/// Encodes a state or matrix to bytes.
pub fn write_dense(dense: &Dense, format: DenseFormat) -> Vec<u8> {
    let mut out = Vec::new();
    // Writing to a Vec cannot fail.
    match dense {
        Dense::State(s) => write_state(&mut out, s, format),
        Dense::Matrix(m) => write_matrix(&mut out, m, format),
    }
    .expect("in-memory write");
    out
}

/// Decodes either encoding; binary is recognized by its magic bytes.
pub fn read_dense(bytes: &[u8]) -> ParseResult<Dense> {
    if bytes.starts_with(MAGIC) {
        read_binary(bytes)
    } else {
        let text =
            std::str::from_utf8(bytes).map_err(|_| ParseError::syntax(0, "not UTF-8 text"))?;
        read_text(text)
    }
}

fn read_binary(bytes: &[u8]) -> ParseResult<Dense> {
    if bytes.len() < HEADER_LEN {
        return Err(ParseError::syntax(0, "truncated header"));
    }
    if bytes[4] != FORMAT_VERSION {
        return Err(ParseError::syntax(
            0,
            format!("unsupported version {}", bytes[4]),
        ));
    }
    let kind = bytes[5];
    let n = u16::from_le_bytes([bytes[6], bytes[7]]) as usize;
    let count_bits = match kind {
        KIND_STATE => n,
        KIND_MATRIX => 2 * n,
        other => return Err(ParseError::syntax(0, format!("unknown kind {other}"))),
    };
    if count_bits > MAX_WORD_QUBITS {
        return Err(ParseError::syntax(0, format!("n = {n} too large")));
    }
    let body = &bytes[HEADER_LEN..];
    let count = 1usize << count_bits;
    if body.len() != 16 * count {
        return Err(ParseError::syntax(
            0,
            format!(
                "expected {} payload bytes, found {}",
                16 * count,
                body.len()
            ),
        ));
    }
    let values: Vec<Complex64> = body
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    Ok(match kind {
        KIND_STATE => Dense::State(DenseState::new(n, values)),
        _ => Dense::Matrix(DenseMatrix::new(n, values)),
    })
}

fn read_text(text: &str) -> ParseResult<Dense> {
    // (line number, leading indices, value)
    let mut entries: Vec<(usize, Vec<usize>, Complex64)> = Vec::new();
    for (no, line) in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let width = entries.first().map_or(fields.len(), |e| e.1.len() + 2);
        if fields.len() != width || !(width == 3 || width == 4) {
            return Err(ParseError::syntax(
                no,
                "expected `index re im` or `col row re im`",
            ));
        }
        let indices = fields[..width - 2]
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|_| ParseError::syntax(no, format!("bad index {s:?}")))
            })
            .collect::<ParseResult<Vec<usize>>>()?;
        let re = parse_f64(no, fields[width - 2])?;
        let im = parse_f64(no, fields[width - 1])?;
        entries.push((no, indices, Complex64::new(re, im)));
    }
    let count = entries.len();
    if count == 0 || !count.is_power_of_two() {
        return Err(ParseError::syntax(
            0,
            format!("{count} entries is not a power of two"),
        ));
    }
    let bits = count.trailing_zeros() as usize;
    let is_matrix = entries[0].1.len() == 2;
    if is_matrix && !bits.is_multiple_of(2) {
        return Err(ParseError::syntax(
            0,
            format!("{count} matrix entries is not a power of four"),
        ));
    }
    let dim = 1usize << (bits / 2);
    let mut values = Vec::with_capacity(count);
    for (i, (no, indices, z)) in entries.into_iter().enumerate() {
        let expected = if is_matrix {
            vec![i / dim, i % dim]
        } else {
            vec![i]
        };
        if indices != expected {
            return Err(ParseError::syntax(
                no,
                format!("expected index {expected:?}, found {indices:?}"),
            ));
        }
        values.push(z);
    }
    Ok(if is_matrix {
        Dense::Matrix(DenseMatrix::new(bits / 2, values))
    } else {
        Dense::State(DenseState::new(bits, values))
    })
}
