//! Scaling benchmarks on seeded worst-case instances.
//!
//! Each measurement times the expansion into a preallocated, pre-touched
//! output buffer. Allocation is excluded; zero-filling is included wherever the
//! algorithm needs it (state vectors, whose support may be sparse). Matrix
//! expansion overwrites every entry and does no fill. The reported time is the
//! minimum over repetitions.

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clifford::{first_column, tableau_to_matrix_into};
use crate::error::Result;
use crate::instances;
use crate::model::zeroed;
use crate::pauli::apply_pauli_into;
use crate::qf_expand::{expand_into, naive_into};
use crate::{FlipLookup, Limits};

pub const CSV_HEADER: &str = "task,n,k,reps,total_s,per_element_ns";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    /// Quadratic form to state vector, `k = n`.
    Qf,
    /// The per-point reference expansion on the same instances as `Qf`.
    QfNaive,
    /// One Pauli application to a random dense vector.
    Pauli,
    /// Tableau to dense matrix, including the first column.
    Tableau,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Qf => "qf",
            Task::QfNaive => "qf-naive",
            Task::Pauli => "pauli",
            Task::Tableau => "tableau",
        }
    }

    /// log2 of the number of output entries.
    fn output_bits(self, n: usize) -> usize {
        match self {
            Task::Tableau => 2 * n,
            _ => n,
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Task, String> {
        match s {
            "qf" => Ok(Task::Qf),
            "qf-naive" => Ok(Task::QfNaive),
            "pauli" => Ok(Task::Pauli),
            "tableau" => Ok(Task::Tableau),
            other => Err(format!("unknown task {other:?}")),
        }
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub task: Task,
    pub n: usize,
    pub k: usize,
    pub reps: usize,
    /// Minimum wall time over the repetitions.
    pub total_s: f64,
    pub per_element_ns: f64,
}

impl Measurement {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{:.9},{:.4}",
            self.task, self.n, self.k, self.reps, self.total_s, self.per_element_ns
        )
    }
}

/// Seed used for the instance on `n` qubits.
fn instance_rng(seed: u64, n: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn min_time(reps: usize, mut run: impl FnMut() -> Result<()>) -> Result<Duration> {
    let mut best = Duration::MAX;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        run()?;
        best = best.min(start.elapsed());
    }
    Ok(best)
}

/// Times `task` on the seeded instance for `n` qubits.
pub fn measure(
    task: Task,
    n: usize,
    reps: usize,
    seed: u64,
    limits: &Limits,
) -> Result<Measurement> {
    match task {
        Task::Tableau => limits.check_matrix("benchmark matrix", n)?,
        _ => limits.check_state("benchmark state", n)?,
    }
    let mut rng = instance_rng(seed, n);
    let elements = 1usize << task.output_bits(n);
    let mut out = zeroed(elements)?;
    let zero = Complex64::new(0.0, 0.0);

    let elapsed = match task {
        Task::Qf => {
            let qf = instances::random_qf(n, n, &mut rng);
            min_time(reps, || {
                expand_into(&qf, FlipLookup::TrailingZeros, &mut out)?;
                black_box(&out);
                Ok(())
            })?
        }
        Task::QfNaive => {
            let qf = instances::random_qf(n, n, &mut rng);
            min_time(reps, || {
                naive_into(&qf, &mut out);
                black_box(&out);
                Ok(())
            })?
        }
        Task::Pauli => {
            let psi = instances::random_state(n, &mut rng);
            let p = instances::random_pauli(n, &mut rng);
            min_time(reps, || {
                out.fill(zero);
                apply_pauli_into(&psi.amps, &p, &mut out);
                black_box(&out);
                Ok(())
            })?
        }
        Task::Tableau => {
            let tab = instances::random_tableau(n, &mut rng);
            min_time(reps, || {
                let c0 = first_column(&tab)?;
                tableau_to_matrix_into(&tab, &c0.amps, &mut out, 1)?;
                black_box(&out);
                Ok(())
            })?
        }
    };

    let total_s = elapsed.as_secs_f64();
    Ok(Measurement {
        task,
        n,
        k: n,
        reps: reps.max(1),
        total_s,
        per_element_ns: total_s * 1e9 / elements as f64,
    })
}

/// Measures every `n` in `range`.
pub fn sweep(
    task: Task,
    range: std::ops::RangeInclusive<usize>,
    reps: usize,
    seed: u64,
    limits: &Limits,
) -> Result<Vec<Measurement>> {
    range
        .map(|n| measure(task, n, reps, seed, limits))
        .collect()
}

/// Measures every size in `sizes`, `rounds` times over, cycling through the
/// sizes in each round, and keeps the median round per size.
///
/// Interleaving exposes every size to the same machine conditions, and each
/// round gets a fresh output buffer. The median discards outliers in either
/// direction, which matters when comparing sizes against each other.
pub fn sweep_rounds(
    task: Task,
    sizes: &[usize],
    reps: usize,
    rounds: usize,
    seed: u64,
    limits: &Limits,
) -> Result<Vec<Measurement>> {
    let rounds = rounds.max(1);
    let mut all: Vec<Vec<Measurement>> = vec![Vec::with_capacity(rounds); sizes.len()];
    for _ in 0..rounds {
        for (runs, &n) in all.iter_mut().zip(sizes) {
            runs.push(measure(task, n, reps, seed, limits)?);
        }
    }
    Ok(all
        .into_iter()
        .map(|mut runs| {
            runs.sort_by(|a, b| a.total_s.total_cmp(&b.total_s));
            let median = runs.swap_remove(rounds / 2);
            Measurement {
                reps: median.reps * rounds,
                ..median
            }
        })
        .collect())
}

/// Total-time ratios between consecutive entries of `sizes`.
///
/// Each round measures every size back to back and forms its own ratios; the
/// result is the per-position median over rounds. Pairing measurements taken
/// moments apart cancels slow drifts in machine speed that would otherwise
/// leak into a ratio of independently measured times.
pub fn scaling_ratios(
    task: Task,
    sizes: &[usize],
    reps: usize,
    rounds: usize,
    seed: u64,
    limits: &Limits,
) -> Result<Vec<f64>> {
    let pairs = sizes.len().saturating_sub(1);
    let mut per_pair: Vec<Vec<f64>> = vec![Vec::new(); pairs];
    for _ in 0..rounds.max(1) {
        let times = sizes
            .iter()
            .map(|&n| measure(task, n, reps, seed, limits).map(|m| m.total_s))
            .collect::<Result<Vec<_>>>()?;
        for (ratios, w) in per_pair.iter_mut().zip(times.windows(2)) {
            ratios.push(w[1] / w[0]);
        }
    }
    Ok(per_pair
        .into_iter()
        .map(|mut r| {
            r.sort_by(f64::total_cmp);
            r[r.len() / 2]
        })
        .collect())
}
