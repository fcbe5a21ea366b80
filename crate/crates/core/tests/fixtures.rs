//! Expected dense outputs for the fixture files.

mod common;

use std::f64::consts::FRAC_1_SQRT_2 as R;

use common::{c, fixture_text};
use stabmat::clifford::{conjugation_oracle, expand_tableau};
use stabmat::io::{self, ParseErrorKind};
use stabmat::qf_expand::expand;
use stabmat::reduction::{check_to_qf, check_to_state, stabilizer_eigencheck};
use stabmat::{DenseMatrix, DenseState, Error, ValidationError};

fn state(values: &[(f64, f64)]) -> DenseState {
    DenseState::new(
        values.len().trailing_zeros() as usize,
        values.iter().map(|&(r, i)| c(r, i)).collect(),
    )
}

#[test]
fn example_one() {
    let psi = expand(&io::parse_qf(&fixture_text("example1.qf")).unwrap()).unwrap();
    assert!(psi.max_diff(&state(&[(R, 0.0), (0.0, R)])) <= 1e-15);
}

#[test]
fn cluster_from_both_descriptions() {
    let expected = state(&[(0.5, 0.0), (0.5, 0.0), (0.5, 0.0), (-0.5, 0.0)]);
    let from_qf = expand(&io::parse_qf(&fixture_text("cluster.qf")).unwrap()).unwrap();
    assert!(from_qf.max_diff(&expected) <= 1e-15);
    let cm = io::parse_check(&fixture_text("cluster.check")).unwrap();
    let from_check = check_to_state(&cm).unwrap();
    assert!(from_check.max_diff(&expected) <= 1e-15);
    assert_eq!(stabilizer_eigencheck(&cm, &from_qf).unwrap(), 0.0);
}

#[test]
fn explicit_gamma_and_shift() {
    let qf = io::parse_qf(&fixture_text("shifted.qf")).unwrap();
    let psi = expand(&qf).unwrap();
    // h = 101 -> index 5, v = 011 -> bits 2 and 3; J_11 = 1 negates the second point.
    let mut expected = vec![(0.0, 0.0); 8];
    expected[0b101] = (0.6, -0.8);
    expected[0b011] = (-0.6, 0.8);
    assert!(psi.max_diff(&state(&expected)) <= 1e-15);
}

#[test]
fn single_and_mixed_checks() {
    let y = check_to_state(&io::parse_check(&fixture_text("y.check")).unwrap()).unwrap();
    assert!(y.max_diff(&state(&[(R, 0.0), (0.0, R)])) <= 1e-15);

    // -Z on qubit 1 -> |1>, +X on qubit 2 -> |+>, -Y on qubit 3 -> (|0> - i|1>)/sqrt2.
    let cm = io::parse_check(&fixture_text("mixed.check")).unwrap();
    let psi = check_to_state(&cm).unwrap();
    let mut expected = vec![(0.0, 0.0); 8];
    expected[0b001] = (0.5, 0.0);
    expected[0b011] = (0.5, 0.0);
    expected[0b101] = (0.0, -0.5);
    expected[0b111] = (0.0, -0.5);
    assert!(psi.max_diff(&state(&expected)) <= 1e-15);
    assert_eq!(check_to_qf(&cm).unwrap().basis.len(), 2);
}

#[test]
fn bell_pair() {
    let psi = check_to_state(&io::parse_check(&fixture_text("bell.check")).unwrap()).unwrap();
    assert!(psi.max_diff(&state(&[(R, 0.0), (0.0, 0.0), (0.0, 0.0), (R, 0.0)])) <= 1e-15);
}

#[test]
fn tableau_fixtures() {
    let id =
        expand_tableau(&io::parse_tableau(&fixture_text("identity2.tableau")).unwrap()).unwrap();
    assert_eq!(id, DenseMatrix::identity(2));
    for name in ["hadamard.tableau", "phase.tableau", "cnot.tableau"] {
        let tab = io::parse_tableau(&fixture_text(name)).unwrap();
        let m = expand_tableau(&tab).unwrap();
        assert!(conjugation_oracle(&m, &tab).unwrap() <= 1e-15, "{name}");
    }
}

#[test]
fn dependent_or_anticommuting_rows_are_rejected() {
    let twice = io::parse_check("+ZZ\n+ZZ\n").unwrap();
    assert!(matches!(
        check_to_qf(&twice),
        Err(Error::InvalidCheckMatrix(ValidationError::DependentRows))
    ));
    let clash = io::parse_check("+ZI\n+XI\n").unwrap();
    assert!(matches!(
        check_to_qf(&clash),
        Err(Error::InvalidCheckMatrix(
            ValidationError::NonCommutingRows(1, 2)
        ))
    ));
    let short = io::parse_check("+ZI\n").unwrap();
    assert!(check_to_qf(&short).is_err());
    let e = io::parse_qf("n=1\nk=1\nh=0\nd=0\nJ=0\ngamma=auto\n").unwrap_err();
    assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
}
