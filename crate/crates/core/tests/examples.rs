use semiquant_core::algebra::{
    bracket, cn_coefficient, jacobiator, leibniz_defect, poisson, qbracket, star_multiply, BracketKind,
};
use semiquant_core::hybridfield::{mass_spectrum, reflection_positivity, FieldParams, Positivity, Residue};
use semiquant_core::nogo::{run_verification, StepOutcome};
use semiquant_core::{Dims, GaussianRational, Monomial, Observable, Scalar};

const D: Dims = Dims::ONE_ONE;

fn m(r: u32, s: u32, t: u32, l: u32) -> Observable {
    Observable::monomial(D, Monomial::qpxk(r, s, t, l))
}

fn c(s: Scalar) -> Observable {
    Observable::constant(D, s)
}

fn scaled(o: Observable, s: Scalar) -> Observable {
    o.scale(&s)
}

#[test]
fn poisson_examples() {
    assert_eq!(poisson(&m(1, 0, 1, 0), &m(0, 1, 0, 1)), m(1, 1, 0, 0));
    assert_eq!(
        poisson(&m(0, 0, 2, 0), &m(0, 0, 0, 1)),
        scaled(m(0, 0, 1, 0), Scalar::int(2))
    );
}

#[test]
fn quantum_bracket_of_squares() {
    let expected = &scaled(m(1, 1, 0, 0), Scalar::int(4)) - &c(Scalar::i_hbar().scale(&GaussianRational::from_int(2)));
    assert_eq!(qbracket(&m(2, 0, 0, 0), &m(0, 2, 0, 0)), expected);
    assert!(qbracket(&m(0, 0, 1, 0), &m(0, 1, 0, 0)).is_zero());
}

#[test]
fn standard_hybrid_mixed_pair() {
    let half = GaussianRational::from_ratio(1, 2);
    let expected = &(&m(0, 0, 1, 1) + &m(1, 1, 0, 0)) - &c(Scalar::i_hbar().scale(&half));
    assert_eq!(
        bracket(BracketKind::StandardHybrid, &m(1, 0, 1, 0), &m(0, 1, 0, 1)),
        expected
    );
    assert_eq!(
        bracket(BracketKind::StandardHybrid, &m(1, 0, 0, 0), &m(0, 1, 0, 0)),
        Observable::one(D)
    );
    assert_eq!(
        bracket(BracketKind::StandardHybrid, &m(0, 0, 1, 0), &m(0, 0, 0, 1)),
        Observable::one(D)
    );
}

#[test]
fn star_of_squares() {
    let hc = Scalar::hbarc();
    let expected = &(&m(0, 0, 2, 2)
        + &scaled(
            m(0, 0, 1, 1),
            (&Scalar::i() * &hc).scale(&GaussianRational::from_int(2)),
        ))
        - &c((&hc * &hc).scale(&GaussianRational::from_ratio(1, 2)));
    assert_eq!(star_multiply(&m(0, 0, 2, 0), &m(0, 0, 0, 2), 2), expected);
    assert_eq!(star_multiply(&m(1, 0, 0, 0), &m(0, 1, 0, 0), 3), m(1, 1, 0, 0));
}

#[test]
fn first_star_coefficient() {
    assert_eq!(cn_coefficient(1, &m(0, 0, 1, 0), &m(0, 0, 0, 1)), c(Scalar::i()));
    assert_eq!(cn_coefficient(0, &m(1, 0, 0, 0), &m(0, 1, 0, 0)), c(Scalar::i_hbar()));
}

#[test]
fn jacobiator_and_leibniz() {
    let quadratic = jacobiator(
        BracketKind::StandardHybrid,
        &m(1, 0, 1, 0),
        &m(0, 1, 1, 0),
        &m(0, 0, 0, 2),
    );
    assert!(quadratic.is_zero());
    let defect = leibniz_defect(
        BracketKind::StandardHybrid,
        &m(1, 0, 0, 0),
        &m(0, 0, 1, 0),
        &m(0, 1, 0, 1),
    );
    assert_eq!(defect, c(-Scalar::i_hbar().scale(&GaussianRational::from_ratio(1, 2))));
}

#[test]
fn first_induction_step() {
    let report = run_verification(1).unwrap();
    assert_eq!(report.unknown_counts(), vec![6]);
    assert!(matches!(report.steps[0].outcome(), StepOutcome::Unique));
    assert_eq!(report.steps[0].matches_standard_hybrid, Some(true));
}

#[test]
fn uncoupled_spectrum_and_classical_witness() {
    let s = mass_spectrum(&FieldParams::new(1.0, 4.0, 0.0, 1.0, 1.0).unwrap());
    assert_eq!((s.mplussq, s.mminussq, s.m3sq), (4.0, 1.0, 2.5));
    match reflection_positivity(&FieldParams::new(1.0, 4.0, 1.0, 1.0, 0.0).unwrap()) {
        Positivity::NotPositive(w) => {
            assert_eq!(w.residue, Residue::Three);
            assert!(w.eigenvalue < 0.0);
        }
        Positivity::Positive => panic!("expected a witness"),
    }
}
