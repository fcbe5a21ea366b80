use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use stabmat::bench::{self, Task, CSV_HEADER};
use stabmat::io::{self as formats, Dense, DenseFormat, ParseErrorKind};
use stabmat::{clifford, pauli, qf_expand, reduction, Error, FlipLookup, Limits};

/// Residual above which `verify` fails.
const VERIFY_TOLERANCE: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "stabmat",
    version,
    about = "Materialize dense stabilizer states and Clifford matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Bin,
}

impl From<Format> for DenseFormat {
    fn from(f: Format) -> DenseFormat {
        match f {
            Format::Text => DenseFormat::Text,
            Format::Bin => DenseFormat::Binary,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Qf,
    Check,
    Tableau,
}

#[derive(Subcommand)]
enum Command {
    /// Quadratic-form file to dense state vector.
    Qf2vec {
        #[arg(long)]
        input: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "bin")]
        format: Format,
        /// Use the per-point reference expansion.
        #[arg(long)]
        naive: bool,
        /// Index flip tables by one-hot flip word instead of trailing-zero count.
        #[arg(long)]
        one_hot: bool,
    },
    /// Check-matrix file to dense state vector.
    Check2vec {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "bin")]
        format: Format,
    },
    /// Tableau file to dense Clifford matrix.
    Tableau2mat {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "bin")]
        format: Format,
        /// Split the column walk over this many threads (rounded down to a power of two).
        #[arg(long, default_value_t = 1)]
        segments: usize,
    },
    /// Apply a Pauli string such as `-iXZY` to a dense state file.
    PauliApply {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        pauli: String,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "bin")]
        format: Format,
    },
    /// Expand with the fast path and check the result against a brute-force oracle.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Check this dense output file against the description instead of
        /// expanding it.
        #[arg(long)]
        dense: Option<PathBuf>,
    },
    /// Time expansions over a range of qubit counts and emit CSV.
    Bench {
        /// qf, qf-naive, pauli or tableau.
        #[arg(long)]
        task: Task,
        #[arg(long)]
        nmin: usize,
        #[arg(long)]
        nmax: usize,
        /// Timed runs per measurement; the fastest is reported.
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Repeat the whole sweep this many times, interleaving sizes, and
        /// report the median round per size.
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// A failure mapped to a process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::Parse(p) if matches!(p.kind, ParseErrorKind::Invalid(_)) => 2,
            Error::Parse(_) => 1,
            Error::Validation(_)
            | Error::InvalidCheckMatrix(_)
            | Error::InvalidTableau(_)
            | Error::ContradictorySigns
            | Error::DimensionMismatch { .. } => 2,
            Error::TooLarge { .. } | Error::Allocation(_) | Error::Io(_) => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Error::Io(e).into()
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: 3,
        message: format!("{}: {e}", path.display()),
    })
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure {
            code: 3,
            message: format!("{}: {e}", p.display()),
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_dense_file(path: &Path) -> Result<Dense, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure {
        code: 3,
        message: format!("{}: {e}", path.display()),
    })?;
    Ok(formats::read_dense(&bytes).map_err(Error::from)?)
}

fn mismatch(message: String) -> Failure {
    Failure { code: 2, message }
}

fn expect_state(dense: Dense, n: usize) -> Result<stabmat::DenseState, Failure> {
    match dense {
        Dense::State(psi) if psi.n == n => Ok(psi),
        _ => Err(mismatch(format!("expected a {n}-qubit state"))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let limits = Limits::from_env();
    match cli.command {
        Command::Qf2vec {
            input,
            output,
            format,
            naive,
            one_hot,
        } => {
            let qf = formats::parse_qf(&read_input(&input)?).map_err(Error::from)?;
            let psi = if naive {
                qf_expand::expand_naive_with(&qf, &limits)?
            } else {
                let lookup = if one_hot {
                    FlipLookup::OneHot
                } else {
                    FlipLookup::TrailingZeros
                };
                qf_expand::expand_with(&qf, &limits, lookup)?
            };
            let mut out = open_output(output.as_deref())?;
            formats::write_state(&mut out, &psi, format.into())?;
            out.flush()?;
        }
        Command::Check2vec {
            input,
            output,
            format,
        } => {
            let cm = formats::parse_check(&read_input(&input)?).map_err(Error::from)?;
            let qf = reduction::check_to_qf(&cm)?;
            let psi = qf_expand::expand_with(&qf, &limits, FlipLookup::default())?;
            let mut out = open_output(output.as_deref())?;
            formats::write_state(&mut out, &psi, format.into())?;
            out.flush()?;
        }
        Command::Tableau2mat {
            input,
            output,
            format,
            segments,
        } => {
            let tab = formats::parse_tableau(&read_input(&input)?).map_err(Error::from)?;
            let m = clifford::expand_tableau_with(&tab, &limits, segments)?;
            let mut out = open_output(output.as_deref())?;
            formats::write_matrix(&mut out, &m, format.into())?;
            out.flush()?;
        }
        Command::PauliApply {
            state,
            pauli: spec,
            output,
            format,
        } => {
            let Dense::State(psi) = read_dense_file(&state)? else {
                return Err(mismatch(format!(
                    "{} holds a matrix, expected a state",
                    state.display()
                )));
            };
            let p = formats::parse_pauli(&spec)
                .map_err(|kind| Error::from(formats::ParseError { line: 0, kind }))?;
            let phi = pauli::apply_pauli(&psi, &p)?;
            let mut out = open_output(output.as_deref())?;
            formats::write_state(&mut out, &phi, format.into())?;
            out.flush()?;
        }
        Command::Verify { input, kind, dense } => {
            let text = read_input(&input)?;
            let given = dense.as_deref().map(read_dense_file).transpose()?;
            let residual = match kind {
                Kind::Qf => {
                    let qf = formats::parse_qf(&text).map_err(Error::from)?;
                    let naive = qf_expand::expand_naive_with(&qf, &limits)?;
                    let psi = match given {
                        Some(d) => expect_state(d, qf.n)?,
                        None => qf_expand::expand_with(&qf, &limits, FlipLookup::default())?,
                    };
                    psi.max_diff(&naive)
                }
                Kind::Check => {
                    let cm = formats::parse_check(&text).map_err(Error::from)?;
                    let psi = match given {
                        Some(d) => expect_state(d, cm.n)?,
                        None => {
                            let qf = reduction::check_to_qf(&cm)?;
                            qf_expand::expand_with(&qf, &limits, FlipLookup::default())?
                        }
                    };
                    reduction::stabilizer_eigencheck(&cm, &psi)?
                }
                Kind::Tableau => {
                    let tab = formats::parse_tableau(&text).map_err(Error::from)?;
                    let m = match given {
                        Some(Dense::Matrix(m)) if m.n == tab.n => m,
                        Some(_) => {
                            return Err(mismatch(format!("expected a {}-qubit matrix", tab.n)))
                        }
                        None => clifford::expand_tableau_with(&tab, &limits, 1)?,
                    };
                    clifford::conjugation_oracle_with(&m, &tab, &limits)?
                }
            };
            println!("max_residual {residual:e}");
            if residual.is_nan() || residual > VERIFY_TOLERANCE {
                return Err(Failure {
                    code: 4,
                    message: format!("residual {residual:e} exceeds {VERIFY_TOLERANCE:e}"),
                });
            }
        }
        Command::Bench {
            task,
            nmin,
            nmax,
            reps,
            rounds,
            seed,
            csv,
        } => {
            if nmin > nmax {
                return Err(Failure {
                    code: 2,
                    message: format!("--nmin {nmin} exceeds --nmax {nmax}"),
                });
            }
            let mut out = open_output(csv.as_deref())?;
            writeln!(out, "{CSV_HEADER}")?;
            if rounds <= 1 {
                for n in nmin..=nmax {
                    let row = bench::measure(task, n, reps, seed, &limits)?;
                    writeln!(out, "{}", row.csv_line())?;
                    out.flush()?;
                }
            } else {
                let sizes: Vec<usize> = (nmin..=nmax).collect();
                for row in bench::sweep_rounds(task, &sizes, reps, rounds, seed, &limits)? {
                    writeln!(out, "{}", row.csv_line())?;
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("stabmat: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
