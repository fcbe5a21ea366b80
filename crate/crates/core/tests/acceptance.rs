//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use common::{bits, c, diff_up_to_phase, fixture_text, gate_matrix, rng, same_bits, word_matrix};
use stabmat::bench::{self, Task};
use stabmat::clifford::{conjugation_oracle, expand_tableau};
use stabmat::instances::{self, Gate};
use stabmat::io::{self, Dense, DenseFormat};
use stabmat::pauli::{apply_pauli, apply_pauli_naive, apply_pauli_with};
use stabmat::qf_expand::{
    build_interaction, expand, expand_exact, expand_naive, expand_with, PhaseWalk, WalkState,
};
use stabmat::reduction::{check_to_qf, stabilizer_eigencheck};
use stabmat::words::{dot, flip_index, flip_word};
use stabmat::{
    CliffordTableau, DenseMatrix, DenseState, FlipLookup, Limits, PauliOp, Phase, QuadraticForm,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed < budget, || {
        format!("took {elapsed:?}, budget {budget:?}")
    })
}

fn example_one() -> QuadraticForm {
    QuadraticForm {
        n: 1,
        shift: 0,
        basis: vec![0b1],
        linear: 0b1,
        quadratic: vec![0],
        gamma: QuadraticForm::normalizing_gamma(1),
    }
}

fn example_two() -> QuadraticForm {
    QuadraticForm {
        n: 2,
        shift: 0,
        basis: vec![0b01, 0b10],
        linear: 0,
        quadratic: vec![0b10, 0b00],
        gamma: QuadraticForm::normalizing_gamma(2),
    }
}

fn golden_examples() -> Outcome {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let start = Instant::now();
    let one = expand(&example_one()).map_err(|e| e.to_string())?;
    let two = expand(&example_two()).map_err(|e| e.to_string())?;
    let walk: Vec<(u64, u8)> = expand_exact(&example_two())
        .map_err(|e| e.to_string())?
        .map(|(x, q)| (x, q.exponent()))
        .collect();
    let elapsed = start.elapsed();

    let err1 = one.max_diff(&DenseState::new(1, vec![c(r, 0.0), c(0.0, r)]));
    ensure(err1 <= 1e-15, || format!("example 1 off by {err1:e}"))?;
    let half = |s: f64| c(0.5 * s, 0.0);
    let err2 = two.max_diff(&DenseState::new(
        2,
        vec![half(1.0), half(1.0), half(1.0), half(-1.0)],
    ));
    ensure(err2 <= 1e-15, || format!("example 2 off by {err2:e}"))?;
    let exponents: Vec<u8> = walk.iter().map(|&(_, q)| q).collect();
    ensure(exponents == [0, 0, 2, 0], || {
        format!("example 2 exponents {exponents:?}")
    })?;
    let support: Vec<u64> = walk.iter().map(|&(x, _)| x).collect();
    ensure(support == [0, 1, 3, 2], || {
        format!("example 2 walk order {support:?}")
    })?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!(
        "exponents (0,0,2,0), max error {:e}, {elapsed:?}",
        err1.max(err2)
    ))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1);
    let limits = Limits::default();
    let mut nonzero = 0usize;
    for i in 0..500 {
        let n = 1 + i % 10;
        let k = (i / 10) % (n + 1);
        let qf = instances::random_qf(n, k, &mut rng);
        let naive = expand_naive(&qf).map_err(|e| e.to_string())?;
        for lookup in [FlipLookup::TrailingZeros, FlipLookup::OneHot] {
            let fast = expand_with(&qf, &limits, lookup).map_err(|e| e.to_string())?;
            ensure(same_bits(&fast, &naive), || {
                format!("instance {i} (n={n}, k={k}, {lookup:?}) differs")
            })?;
        }
        let support = naive
            .amps
            .iter()
            .filter(|z| **z != Complex64::new(0.0, 0.0))
            .count();
        ensure(support == 1 << k, || {
            format!("instance {i}: {support} nonzero entries, expected 2^{k}")
        })?;
        nonzero += support;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!(
        "500 instances bit-identical, {nonzero} support points, {elapsed:?}"
    ))
}

/// `d.y + 2 y^T J y` read straight from the description.
fn phase_from_definition(qf: &QuadraticForm, y: u64) -> u32 {
    let k = qf.k();
    let mut q = (qf.linear & y).count_ones();
    for i in 0..k {
        for j in i..k {
            if qf.j(i, j) && (y >> i) & 1 == 1 && (y >> j) & 1 == 1 {
                q += 2;
            }
        }
    }
    q % 4
}

/// `(B y)_i = sum_{j != i} (J_ij + J_ji) y_j`, read straight from the description.
fn parity_from_definition(qf: &QuadraticForm, y: u64) -> u64 {
    let k = qf.k();
    let mut p = 0;
    for i in 0..k {
        for j in 0..k {
            if i != j && (qf.j(i, j) || qf.j(j, i)) && (y >> j) & 1 == 1 {
                p ^= 1 << i;
            }
        }
    }
    p
}

fn walk_invariants() -> Outcome {
    let mut rng = rng(2);
    let (mut instances_run, mut steps, mut violations) = (0, 0u64, Vec::new());
    for i in 0..160 {
        let n = 1 + i % 8;
        let k = rng.gen_range(0..=n);
        let qf = instances::random_qf(n, k, &mut rng);
        let inter = build_interaction(&qf);
        let mut state = WalkState::origin(qf.shift);
        let mut walk = PhaseWalk::new(&qf, FlipLookup::TrailingZeros).map_err(|e| e.to_string())?;
        walk.next();
        for m in 1..1u64 << k {
            let f = flip_word(m);
            let t = flip_index(m);
            let before = state;
            let y_after = before.y ^ f;
            // Increment of the phase when coordinate t flips.
            let a = inter.linear[t];
            let claimed = if before.y & f == 0 { a } else { -a } + Phase::sign(before.p & f != 0);
            let actual = Phase::new(phase_from_definition(&qf, y_after))
                - Phase::new(phase_from_definition(&qf, before.y));
            if claimed != actual {
                violations.push(format!(
                    "n={n} k={k} m={m}: increment {claimed} vs {actual}"
                ));
            }
            state.advance(f, a, qf.basis[t], inter.columns[t]);
            // Parity word after one XOR of column t.
            if state.p != parity_from_definition(&qf, y_after)
                || state.p != before.p ^ inter.columns[t]
            {
                violations.push(format!("n={n} k={k} m={m}: parity {:b}", state.p));
            }
            if state.q != Phase::new(phase_from_definition(&qf, y_after)) {
                violations.push(format!("n={n} k={k} m={m}: accumulated phase {}", state.q));
            }
            if state != WalkState::at_step(&qf, &inter, m) {
                violations.push(format!(
                    "n={n} k={k} m={m}: registers diverge from closed form"
                ));
            }
            walk.next();
            if walk.state() != state {
                violations.push(format!("n={n} k={k} m={m}: library walk diverges"));
            }
            steps += 1;
        }
        instances_run += 1;
    }
    ensure(violations.is_empty(), || {
        format!("{} violations, first: {}", violations.len(), violations[0])
    })?;
    Ok(format!(
        "{instances_run} walks, {steps} steps, 0 violations"
    ))
}

fn check_pipeline() -> Outcome {
    let mut rng = rng(3);
    let (mut worst_eig, mut worst_norm) = (0.0f64, 0.0f64);
    for i in 0..200 {
        let n = 1 + i % 8;
        let cm = instances::random_check_matrix(n, &mut rng);
        let qf = check_to_qf(&cm).map_err(|e| format!("instance {i}: {e}"))?;
        let psi = expand(&qf).map_err(|e| e.to_string())?;
        worst_eig = worst_eig.max(stabilizer_eigencheck(&cm, &psi).map_err(|e| e.to_string())?);
        worst_norm = worst_norm.max((psi.norm() - 1.0).abs());
    }
    ensure(worst_eig <= 1e-12, || {
        format!("eigencheck residual {worst_eig:e}")
    })?;
    ensure(worst_norm <= 1e-12, || format!("norm error {worst_norm:e}"))?;
    Ok(format!(
        "200 check matrices, eigencheck {worst_eig:e}, norm error {worst_norm:e}"
    ))
}

fn pauli_application() -> Outcome {
    let mut rng = rng(4);
    for i in 0..500 {
        let n = 1 + i % 10;
        let psi = instances::random_state(n, &mut rng);
        let p = instances::random_pauli(n, &mut rng);
        let fast = apply_pauli(&psi, &p).map_err(|e| e.to_string())?;
        let naive = apply_pauli_naive(&psi, &p).map_err(|e| e.to_string())?;
        ensure(same_bits(&fast, &naive), || {
            format!("pair {i} (n={n}, {p}) differs")
        })?;
        let table = apply_pauli_with(&psi, &p, FlipLookup::OneHot).map_err(|e| e.to_string())?;
        ensure(same_bits(&table, &naive), || {
            format!("pair {i}: one-hot variant differs")
        })?;

        let bare = PauliOp::new(n, Phase::ONE, p.w, p.u);
        let twice = apply_pauli(&apply_pauli(&psi, &bare).unwrap(), &bare).unwrap();
        let expected = Phase::sign(dot(p.u, p.w));
        let scaled = DenseState::new(n, psi.amps.iter().map(|&z| expected.rotate(z)).collect());
        let residual = twice.max_diff(&scaled);
        ensure(residual == 0.0, || {
            format!("pair {i}: involution residual {residual:e}")
        })?;
    }
    Ok("500 pairs bit-identical, involution residual 0".into())
}

fn hand_built(n: usize, z: &[&str], x: &[&str]) -> CliffordTableau {
    let parse = |s: &&str| io::parse_pauli(s).unwrap();
    CliffordTableau::new(
        n,
        z.iter().map(parse).collect(),
        x.iter().map(parse).collect(),
    )
}

fn clifford_expansion() -> Outcome {
    let mut rng = rng(5);
    let (mut worst_conj, mut worst_unit, mut worst_word) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..100 {
        let n = 1 + i % 6;
        let word = instances::random_gate_word(n, 10 * n, &mut rng);
        let mut tab = CliffordTableau::identity(n);
        for &g in &word {
            instances::apply_gate(&mut tab, g);
        }
        let m = expand_tableau(&tab).map_err(|e| format!("tableau {i}: {e}"))?;
        worst_conj = worst_conj.max(conjugation_oracle(&m, &tab).map_err(|e| e.to_string())?);
        worst_unit = worst_unit.max(m.adjoint().matmul(&m).max_diff(&DenseMatrix::identity(n)));
        worst_word = worst_word.max(diff_up_to_phase(&m, &word_matrix(n, &word)));
    }
    ensure(worst_conj <= 1e-12, || {
        format!("conjugation residual {worst_conj:e}")
    })?;
    ensure(worst_unit <= 1e-12, || {
        format!("unitarity residual {worst_unit:e}")
    })?;
    ensure(worst_word <= 1e-12, || {
        format!("gate-word product differs by {worst_word:e}")
    })?;

    let gates = [
        (
            "H",
            hand_built(1, &["+X"], &["+Z"]),
            gate_matrix(1, Gate::H(0)),
        ),
        (
            "S",
            hand_built(1, &["+Z"], &["+Y"]),
            gate_matrix(1, Gate::S(0)),
        ),
        (
            "CNOT",
            hand_built(2, &["+ZI", "+ZZ"], &["+XX", "+IX"]),
            gate_matrix(2, Gate::Cnot(0, 1)),
        ),
    ];
    let mut worst_gate = 0.0f64;
    for (name, tab, textbook) in gates {
        let m = expand_tableau(&tab).map_err(|e| format!("{name}: {e}"))?;
        let diff = diff_up_to_phase(&m, &textbook);
        ensure(diff <= 1e-15, || {
            format!("{name} differs from textbook by {diff:e}")
        })?;
        worst_gate = worst_gate.max(diff);
    }
    Ok(format!(
        "100 tableaux, conjugation {worst_conj:e}, unitarity {worst_unit:e}, gate words {worst_word:e}; H/S/CNOT {worst_gate:e}"
    ))
}

fn ratios(task: Task, sizes: &[usize], reps: usize, rounds: usize) -> Result<Vec<f64>, String> {
    bench::scaling_ratios(task, sizes, reps, rounds, 0, &Limits::default())
        .map_err(|e| e.to_string())
}

fn per_element(task: Task, n: usize, reps: usize) -> Result<f64, String> {
    let rows = bench::sweep_rounds(task, &[n], reps, 3, 0, &Limits::default())
        .map_err(|e| e.to_string())?;
    Ok(rows[0].per_element_ns)
}

fn qf_scaling() -> Outcome {
    let start = Instant::now();
    // Total-time ratio over 2^6 times as many amplitudes.
    let growth = ratios(Task::Qf, &[18, 24], 3, 9)?[0] / 64.0;
    let fast = per_element(Task::Qf, 18, 5)?;
    let naive = per_element(Task::QfNaive, 18, 1)?;
    let speedup = naive / fast;
    let elapsed = start.elapsed();
    let detail = format!(
        "per-element growth n=18 to 24 {growth:.2}x; {fast:.2} ns fast vs {naive:.1} ns naive at n=18, speedup {speedup:.1}x; {elapsed:.1?}"
    );
    ensure(growth <= 1.5, || {
        format!("growth {growth:.2}x exceeds 1.5x: {detail}")
    })?;
    ensure(speedup >= 3.0, || {
        format!("speedup {speedup:.2}x below 3x: {detail}")
    })?;
    within(elapsed, Duration::from_secs(120))?;
    Ok(detail)
}

fn tableau_scaling() -> Outcome {
    let start = Instant::now();
    let ratios = ratios(Task::Tableau, &[9, 10, 11, 12], 3, 9)?;
    let elapsed = start.elapsed();
    let detail = format!(
        "ratios {} for n=9..12; {elapsed:.1?}",
        ratios
            .iter()
            .map(|r| format!("{r:.2}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    ensure(ratios.iter().all(|r| (3.0..=6.0).contains(r)), || {
        format!("ratio outside [3, 6]: {detail}")
    })?;
    within(elapsed, Duration::from_secs(120))?;
    Ok(detail)
}

fn dense_round_trip(dense: Dense, what: &str) -> Result<(), String> {
    for format in [DenseFormat::Binary, DenseFormat::Text] {
        let back =
            io::read_dense(&io::write_dense(&dense, format)).map_err(|e| format!("{what}: {e}"))?;
        let same = match (&dense, &back) {
            (Dense::State(a), Dense::State(b)) => a.n == b.n && bits(&a.amps) == bits(&b.amps),
            (Dense::Matrix(a), Dense::Matrix(b)) => {
                a.n == b.n && bits(&a.entries) == bits(&b.entries)
            }
            _ => false,
        };
        ensure(same, || format!("{what}: {format:?} read-back differs"))?;
    }
    Ok(())
}

fn format_round_trips() -> Outcome {
    let mut files = 0;
    for name in ["example1.qf", "cluster.qf", "shifted.qf"] {
        let text = fixture_text(name);
        let qf = io::parse_qf(&text).map_err(|e| format!("{name}: {e}"))?;
        let again = io::serialize_qf(&qf);
        ensure(again == text, || {
            format!("{name}: serialize(parse) changed the text")
        })?;
        ensure(io::parse_qf(&again).as_ref() == Ok(&qf), || {
            format!("{name}: parse(serialize) changed the form")
        })?;
        dense_round_trip(Dense::State(expand(&qf).map_err(|e| e.to_string())?), name)?;
        files += 1;
    }
    for name in ["bell.check", "cluster.check", "y.check", "mixed.check"] {
        let text = fixture_text(name);
        let cm = io::parse_check(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure(cm.validate().is_ok(), || {
            format!("{name}: invalid check matrix")
        })?;
        let again = io::serialize_check(&cm);
        ensure(again == text, || {
            format!("{name}: serialize(parse) changed the text")
        })?;
        ensure(io::parse_check(&again).as_ref() == Ok(&cm), || {
            format!("{name}: parse(serialize) changed the rows")
        })?;
        let psi =
            expand(&check_to_qf(&cm).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        dense_round_trip(Dense::State(psi), name)?;
        files += 1;
    }
    for name in [
        "identity2.tableau",
        "hadamard.tableau",
        "phase.tableau",
        "cnot.tableau",
    ] {
        let text = fixture_text(name);
        let tab = io::parse_tableau(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure(tab.validate().is_ok(), || {
            format!("{name}: invalid tableau")
        })?;
        let again = io::serialize_tableau(&tab);
        ensure(again == text, || {
            format!("{name}: serialize(parse) changed the text")
        })?;
        ensure(io::parse_tableau(&again).as_ref() == Ok(&tab), || {
            format!("{name}: parse(serialize) changed the tableau")
        })?;
        dense_round_trip(
            Dense::Matrix(expand_tableau(&tab).map_err(|e| e.to_string())?),
            name,
        )?;
        files += 1;
    }
    let mut rng = rng(9);
    for n in 1..=10 {
        dense_round_trip(
            Dense::State(instances::random_state(n, &mut rng)),
            "random state",
        )?;
    }
    Ok(format!(
        "{files} fixtures round-trip, binary and text read-back bit-exact"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("golden examples", golden_examples),
        ("fast expansion equals naive oracle", oracle_equivalence),
        ("Gray walk invariants", walk_invariants),
        ("check matrix to state", check_pipeline),
        ("Pauli application", pauli_application),
        ("Clifford tableau to matrix", clifford_expansion),
        ("state expansion scaling", qf_scaling),
        ("matrix expansion scaling", tableau_scaling),
        ("format round trips", format_round_trips),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
