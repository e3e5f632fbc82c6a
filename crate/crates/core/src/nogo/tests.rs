use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::algebra::Var;

type Gq = GaussianRational;

fn obs(r: u32, s: u32, t: u32, l: u32) -> Observable<Gq> {
    Observable::monomial(DIMS, Monomial::qpxk(r, s, t, l))
}

fn affine(o: &Observable<Gq>) -> AffineObservable<Gq> {
    AffineObservable::from_observable(o)
}

fn eq(linear: &[(u32, i64)], constant: i64) -> Equation {
    let m = Monomial::one(DIMS);
    Equation {
        linear: linear.iter().map(|(u, c)| (UnknownId(*u), Gq::from_int(*c))).collect(),
        constant: Gq::from_int(constant),
        provenance: Provenance {
            class: TripleClass(Family::Mixed(2), Family::Mixed(2), Family::Quantum(2)),
            triple: [m.clone(), m.clone(), m],
            monomial: Monomial::one(DIMS),
        },
    }
}

#[test]
fn mixed_basis_sizes() {
    assert_eq!(mixed_basis(1).len(), 0);
    assert_eq!(mixed_basis(2).len(), 4);
    assert_eq!(mixed_basis(3).len(), 12);
    assert_eq!(mixed_basis(4).len(), 25);
}

#[test]
fn axiom_examples() {
    let qx = affine(&obs(1, 0, 1, 0));
    let r = axiom_bracket(&qx, &obs(0, 0, 0, 1)).unwrap();
    assert_eq!(r.to_concrete().unwrap(), obs(1, 0, 0, 0));

    let r = axiom_bracket(&qx, &obs(0, 1, 0, 0)).unwrap();
    assert_eq!(r.to_concrete().unwrap(), obs(0, 0, 1, 0));

    let e = axiom_bracket(&qx, &obs(0, 1, 0, 1));
    assert!(matches!(e, Err(NoGoError::MixedAxiomArgument)));
}

#[test]
fn axiom_bracket_is_linear_in_unknowns() {
    let mut a = affine(&obs(1, 0, 0, 1));
    let mut part = Observable::zero(DIMS);
    part.add_term(Monomial::qpxk(0, 1, 1, 0), &Gq::from_int(3));
    a.add_assign(&AffineObservable::from_parts(
        &Observable::zero(DIMS),
        &BTreeMap::from([(UnknownId(7), part)]),
    ));
    let r = axiom_bracket(&a, &obs(1, 0, 0, 0)).unwrap();
    let parts = r.unknown_parts();
    assert_eq!(parts[&UnknownId(7)], obs(0, 0, 1, 0).scale(&Gq::from_int(-3)));
}

#[test]
fn reconstruct_simple_gradients() {
    let z = AffineObservable::zero(DIMS);
    // (B, q) = -x, (B, k) = p  ->  B = p x
    let b = reconstruct_from_partials(
        &affine(&obs(0, 0, 1, 0)).neg(),
        &z,
        &z,
        &affine(&obs(0, 1, 0, 0)),
        UnknownId(0),
    )
    .unwrap();
    assert_eq!(b.base(), obs(0, 1, 1, 0));
    assert_eq!(b.unknown_parts()[&UnknownId(0)], Observable::one(DIMS));
}

#[test]
fn reconstruct_quadratic() {
    let z = AffineObservable::zero(DIMS);
    // B = q²/2 has (B,p) = q and vanishing other gradients.
    let b = reconstruct_from_partials(&z, &affine(&obs(1, 0, 0, 0)), &z, &z, UnknownId(4)).unwrap();
    assert_eq!(b.base(), obs(2, 0, 0, 0).scale(&Gq::from_ratio(1, 2)));
}

#[test]
fn reconstruct_rejects_non_integrable() {
    let z = AffineObservable::zero(DIMS);
    // ∂B/∂k = -x together with ∂B/∂x = 0 has no solution.
    let r = reconstruct_from_partials(&z, &z, &affine(&obs(0, 0, 1, 0)), &z, UnknownId(0));
    assert!(matches!(r, Err(NoGoError::Integrability(_))));
}

#[test]
fn solve_unique() {
    let sys = LinearSystem {
        unknowns: vec![UnknownId(0), UnknownId(1)],
        equations: vec![eq(&[(0, 1), (1, 1)], -3), eq(&[(0, 1), (1, -1)], -1)],
    };
    let SolveOutcome::Unique(v) = exact_solve(&sys) else {
        panic!("expected unique")
    };
    assert_eq!(v[&UnknownId(0)], Gq::from_int(2));
    assert_eq!(v[&UnknownId(1)], Gq::from_int(1));
}

#[test]
fn solve_underdetermined() {
    let sys = LinearSystem {
        unknowns: vec![UnknownId(0), UnknownId(1)],
        equations: vec![eq(&[(0, 1), (1, 1)], -3), eq(&[(0, 2), (1, 2)], -6)],
    };
    match exact_solve(&sys) {
        SolveOutcome::Underdetermined { free, rank } => {
            assert_eq!(rank, 1);
            assert_eq!(free, vec![UnknownId(1)]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn solve_inconsistent() {
    let sys = LinearSystem {
        unknowns: vec![UnknownId(0)],
        equations: vec![eq(&[(0, 1)], -1), eq(&[(0, 1)], -2)],
    };
    match exact_solve(&sys) {
        SolveOutcome::Inconsistent { constant, .. } => assert_eq!(constant, Gq::from_int(-1)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn solve_complex_coefficients() {
    let sys = LinearSystem {
        unknowns: vec![UnknownId(0)],
        equations: vec![Equation {
            linear: BTreeMap::from([(UnknownId(0), Gq::i())]),
            constant: Gq::one(),
            ..eq(&[], 0)
        }],
    };
    let SolveOutcome::Unique(v) = exact_solve(&sys) else {
        panic!()
    };
    assert_eq!(v[&UnknownId(0)], Gq::i());
}

#[test]
fn step_one_reproduces_standard_hybrid() {
    let r = run_verification(1).unwrap();
    assert_eq!(r.unknown_counts(), vec![6]);
    assert_eq!(r.steps[0].outcome(), StepOutcome::Unique);
    assert_eq!(r.steps[0].matches_standard_hybrid, Some(true));
    assert!(r.steps[0].check.as_ref().unwrap().passed());
    assert_eq!(r.verdict, Verdict::Consistent { through_step: 1 });
    assert!(r.matches_prediction());
}

#[test]
fn full_induction_is_obstructed() {
    let r = run_verification(4).unwrap();
    assert_eq!(r.unknown_counts(), vec![6, 48, 100, 66]);
    for s in &r.steps[..3] {
        assert_eq!(s.outcome(), StepOutcome::Unique, "step {}", s.index);
        assert_eq!(s.matches_standard_hybrid, Some(true));
    }
    assert_eq!(r.steps[3].outcome(), StepOutcome::Inconsistent);
    assert_eq!(r.verdict, Verdict::Obstructed { step: 4 });
    let cert = r.steps[3].certificate.as_ref().unwrap();
    assert!(!cert.residual.is_zero());
    assert!(!cert.witness_value.is_zero());
    assert!(cert.residual_symbolic.max_hbarc_power() == 0);
    assert!(r.matches_prediction());
}

#[test]
fn invalid_step_count() {
    assert!(matches!(run_verification(0), Err(NoGoError::InvalidSteps(0))));
    assert!(matches!(run_verification(5), Err(NoGoError::InvalidSteps(5))));
}

#[test]
fn mixed_triples_are_deduplicated() {
    let c = TripleClass(Family::Mixed(2), Family::Mixed(2), Family::Mixed(2));
    assert_eq!(c.triples().len(), 4);
    let c = TripleClass(Family::Mixed(2), Family::Mixed(2), Family::Quantum(2));
    assert_eq!(c.triples().len(), 6 * 3);
}

#[test]
fn missing_entry_is_reported() {
    let t = BracketTable::<Gq>::new();
    let r = t.bracket_monomials(&Monomial::qpxk(1, 0, 1, 0), &Monomial::qpxk(0, 1, 1, 0));
    assert!(matches!(r, Err(NoGoError::MissingEntry(_))));
}

fn monomial_strategy() -> impl Strategy<Value = Monomial> {
    (0u32..3, 0u32..3, 0u32..3, 0u32..3).prop_map(|(r, s, t, l)| Monomial::qpxk(r, s, t, l))
}

fn poly_strategy() -> impl Strategy<Value = Observable<Gq>> {
    prop::collection::vec((monomial_strategy(), -4i64..5, 1i64..4), 1..6).prop_map(|ts| {
        let mut o = Observable::zero(DIMS);
        for (m, n, d) in ts {
            if !m.is_one() {
                o.add_term(m, &Gq::from_ratio(n, d));
            }
        }
        o
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reconstruct_recovers_polynomials(b in poly_strategy()) {
        let ab = affine(&b);
        let g: Vec<AffineObservable<Gq>> = [Var::Q(0), Var::P(0), Var::X(0), Var::K(0)]
            .into_iter()
            .map(|v| axiom_bracket(&ab, &Observable::var(DIMS, v)).unwrap())
            .collect();
        let rec = reconstruct_from_partials(&g[0], &g[1], &g[2], &g[3], UnknownId(0)).unwrap();
        prop_assert_eq!(rec.base(), b);
        prop_assert_eq!(rec.unknown_parts()[&UnknownId(0)].clone(), Observable::one(DIMS));
    }

    #[test]
    fn solver_is_invariant_under_relabeling(
        sol in prop::collection::vec(-5i64..6, 3),
        rows in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 3..6),
        shift in 1u32..20,
    ) {
        let build = |off: u32| LinearSystem {
            unknowns: (0..3).map(|i| UnknownId(i * off + off)).collect(),
            equations: rows
                .iter()
                .map(|r| {
                    let constant: i64 = -r.iter().zip(&sol).map(|(a, x)| a * x).sum::<i64>();
                    let pairs: Vec<(u32, i64)> = r.iter().enumerate().map(|(i, a)| (i as u32 * off + off, *a)).collect();
                    eq(&pairs, constant)
                })
                .collect(),
        };
        let a = exact_solve(&build(1));
        let b = exact_solve(&build(shift));
        match (a, b) {
            (SolveOutcome::Unique(x), SolveOutcome::Unique(y)) => {
                for i in 0..3u32 {
                    prop_assert_eq!(&x[&UnknownId(i + 1)], &Gq::from_int(sol[i as usize]));
                    prop_assert_eq!(&y[&UnknownId(i * shift + shift)], &Gq::from_int(sol[i as usize]));
                }
            }
            (SolveOutcome::Underdetermined { rank: r1, .. }, SolveOutcome::Underdetermined { rank: r2, .. }) => {
                prop_assert_eq!(r1, r2)
            }
            (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
        }
    }
}
