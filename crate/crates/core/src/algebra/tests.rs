use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::scalar::{GaussianRational, Scalar};

const D: Dims = Dims::ONE_ONE;

fn m(r: u32, s: u32, t: u32, l: u32) -> Observable {
    Observable::monomial(D, Monomial::qpxk(r, s, t, l))
}

fn c(s: Scalar) -> Observable {
    Observable::constant(D, s)
}

fn q() -> Observable {
    m(1, 0, 0, 0)
}
fn p() -> Observable {
    m(0, 1, 0, 0)
}
fn x() -> Observable {
    m(0, 0, 1, 0)
}
fn k() -> Observable {
    m(0, 0, 0, 1)
}

fn half() -> Scalar {
    Scalar::ratio(1, 2)
}

/// Schrödinger representation on polynomials in t with ℏ = 1: `q = t·`,
/// `p = -i d/dt`. Faithful on the Weyl algebra, so agreement on enough
/// monomials t^j certifies an operator identity.
mod oracle {
    use super::*;

    pub type Poly = Vec<GaussianRational>;

    #[derive(Clone, Copy)]
    pub enum Letter {
        Q,
        P,
    }

    fn trim(mut f: Poly) -> Poly {
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
        f
    }

    pub fn apply_q(f: &Poly) -> Poly {
        let mut out = vec![GaussianRational::zero()];
        out.extend(f.iter().cloned());
        trim(out)
    }

    pub fn apply_p(f: &Poly) -> Poly {
        let out: Poly = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| (c * &GaussianRational::from_int(j as i64)).mul_neg_i())
            .collect();
        trim(out)
    }

    /// Apply a word acting right-to-left: the rightmost letter hits f first.
    pub fn apply_word(word: &[Letter], f: &Poly) -> Poly {
        let mut g = f.clone();
        for l in word.iter().rev() {
            g = match l {
                Letter::Q => apply_q(&g),
                Letter::P => apply_p(&g),
            };
        }
        g
    }

    /// Apply a normal-ordered purely quantum observable at ℏ = 1.
    pub fn apply_observable(a: &Observable, f: &Poly) -> Poly {
        let a1 = a.at_unit_hbar().expect("no hbar_c");
        let mut acc: Poly = Vec::new();
        for (mono, coef) in a1.terms() {
            let e = mono.exponents();
            assert!(e.len() < 3 || e[2..].iter().all(|&v| v == 0), "quantum only");
            let mut word = vec![Letter::Q; e[0] as usize];
            word.extend(vec![Letter::P; e[1] as usize]);
            let g = apply_word(&word, f);
            if acc.len() < g.len() {
                acc.resize(g.len(), GaussianRational::zero());
            }
            for (i, gi) in g.iter().enumerate() {
                acc[i] += &(gi * coef);
            }
        }
        trim(acc)
    }

    pub fn monomial_poly(j: usize) -> Poly {
        let mut f = vec![GaussianRational::zero(); j + 1];
        f[j] = GaussianRational::one();
        f
    }

    pub fn agrees(word: &[Letter], a: &Observable, max_deg: usize) -> bool {
        (0..=max_deg).all(|j| {
            let f = monomial_poly(j);
            apply_word(word, &f) == apply_observable(a, &f)
        })
    }
}

use oracle::Letter::{P as LP, Q as LQ};

#[test]
fn multiply_examples() {
    let i_hbar = c(Scalar::i_hbar());
    assert_eq!(&p() * &q(), &m(1, 1, 0, 0) - &i_hbar);
    assert_eq!(&m(1, 0, 1, 0) * &m(1, 0, 1, 0), m(2, 0, 2, 0));
    let expected = &m(1, 2, 0, 0) - &(&c(Scalar::i_hbar()) * &p()).scale(&Scalar::int(2));
    assert_eq!(&(&p() * &p()) * &q(), expected);
}

#[test]
fn multiply_matches_polynomial_representation() {
    assert!(oracle::agrees(&[LP, LQ], &(&p() * &q()), 8));
    assert!(oracle::agrees(&[LP, LP, LQ], &(&(&p() * &p()) * &q()), 8));
    let words: [&[oracle::Letter]; 4] = [
        &[LP, LP, LQ, LQ],
        &[LQ, LP, LQ, LP, LP],
        &[LP, LP, LP, LQ, LQ, LQ],
        &[LP, LQ, LP, LQ],
    ];
    for w in words {
        let prod = w.iter().fold(Observable::one(D), |acc, l| {
            &acc * &match l {
                LQ => q(),
                LP => p(),
            }
        });
        assert!(oracle::agrees(w, &prod, 10));
    }
}

#[test]
fn multiply_dimension_mismatch() {
    let a = Observable::<Scalar>::one(Dims::new(1, 0));
    let b = Observable::<Scalar>::one(Dims::new(1, 1));
    assert!(matches!(multiply(&a, &b), Err(AlgebraError::DimensionMismatch { .. })));
}

#[test]
fn adjoint_examples() {
    assert_eq!(q().adjoint(), q());
    assert_eq!(m(1, 1, 0, 0).adjoint(), &m(1, 1, 0, 0) - &c(Scalar::i_hbar()));
    let a = m(1, 0, 1, 0).scale(&Scalar::i_hbar());
    assert_eq!(a.adjoint(), m(1, 0, 1, 0).scale(&-Scalar::i_hbar()));
    // pq as a word, checked against the polynomial representation
    assert!(oracle::agrees(&[LP, LQ], &m(1, 1, 0, 0).adjoint(), 8));
}

#[test]
fn poisson_examples() {
    assert_eq!(poisson(&x(), &k()), Observable::one(D));
    assert_eq!(poisson(&m(1, 0, 1, 0), &m(0, 1, 0, 1)), m(1, 1, 0, 0));
    assert_eq!(poisson(&m(0, 0, 2, 0), &k()), x().scale(&Scalar::int(2)));
}

#[test]
fn qbracket_examples() {
    assert_eq!(qbracket(&q(), &p()), Observable::one(D));
    let expected = &m(1, 1, 0, 0).scale(&Scalar::int(4)) - &c(Scalar::i_hbar().scale(&GaussianRational::from_int(2)));
    assert_eq!(qbracket(&m(2, 0, 0, 0), &m(0, 2, 0, 0)), expected);
    assert!(qbracket(&x(), &p()).is_zero());
}

#[test]
fn standard_hybrid_examples() {
    let s = BracketKind::StandardHybrid;
    let expected = &(&m(0, 0, 1, 1) + &m(1, 1, 0, 0)) - &c(&Scalar::i_hbar() * &half());
    assert_eq!(bracket(s, &m(1, 0, 1, 0), &m(0, 1, 0, 1)), expected);
    assert_eq!(bracket(s, &q(), &p()), Observable::one(D));
    assert_eq!(bracket(s, &x(), &k()), Observable::one(D));
}

#[test]
fn star_examples() {
    let ihc_half = c(&Scalar::term(GaussianRational::i(), 0, 1) * &half());
    for order in 1..4 {
        assert_eq!(star_multiply(&x(), &k(), order), &m(0, 0, 1, 1) + &ihc_half);
    }
    for order in 0..4 {
        assert_eq!(star_multiply(&q(), &p(), order), m(1, 1, 0, 0));
    }
    let hc = Scalar::hbarc();
    let expected = &(&m(0, 0, 2, 2) + &m(0, 0, 1, 1).scale(&Scalar::term(GaussianRational::from_int(2).mul_i(), 0, 1)))
        - &c(&(&hc * &hc) * &half());
    assert_eq!(star_multiply(&m(0, 0, 2, 0), &m(0, 0, 0, 2), 2), expected);
    // Hand-expanded oracle: the n = 1 and n = 2 terms separately.
    let n1 = star_multiply(&m(0, 0, 2, 0), &m(0, 0, 0, 2), 1);
    assert_eq!(&expected - &n1, c(-(&(&hc * &hc) * &half())));
}

#[test]
fn cn_examples() {
    assert_eq!(cn_coefficient(0, &q(), &p()), c(Scalar::i_hbar()));
    assert_eq!(cn_coefficient(1, &x(), &k()), c(Scalar::i()));
    // Oracle: coefficient of hbar_c in the order-1 star commutator.
    let order1 = &star_multiply(&x(), &k(), 1) - &star_multiply(&k(), &x(), 1);
    assert_eq!(order1.hbarc_coefficient(1), cn_coefficient(1, &x(), &k()));
    let (a, b) = (&m(2, 1, 0, 0) + &q(), m(0, 3, 0, 0));
    for n in 1..5 {
        assert!(cn_coefficient(n, &a, &b).is_zero());
    }
}

fn counterexample() -> (Observable, Observable, Observable) {
    (m(1, 0, 1, 0), m(1, 1, 1, 0), m(0, 1, 0, 2))
}

#[test]
fn jacobiator_counterexample() {
    let (a, b, cc) = counterexample();
    let j = jacobiator(BracketKind::StandardHybrid, &a, &b, &cc);
    // -1/2 (i hbar)^2 = hbar^2 / 2
    let i_hbar = Scalar::i_hbar();
    assert_eq!(j, c(-(&(&i_hbar * &i_hbar) * &half())));
    assert_eq!(j, c(&(&Scalar::hbar() * &Scalar::hbar()) * &half()));
}

#[test]
fn jacobiator_quadratic_witness_vanishes() {
    let j = jacobiator(
        BracketKind::StandardHybrid,
        &m(1, 0, 1, 0),
        &m(0, 1, 1, 0),
        &m(0, 0, 0, 2),
    );
    assert!(j.is_zero());
}

#[test]
fn leibniz_examples() {
    let d = leibniz_defect(BracketKind::StandardHybrid, &q(), &x(), &m(0, 1, 0, 1));
    assert_eq!(d, c(-(&Scalar::i_hbar() * &half())));
    // oracle: direct evaluation through bracket + multiply
    let s = BracketKind::StandardHybrid;
    let direct = &(&bracket(s, &(&q() * &x()), &m(0, 1, 0, 1)) - &(&bracket(s, &q(), &m(0, 1, 0, 1)) * &x()))
        - &(&q() * &bracket(s, &x(), &m(0, 1, 0, 1)));
    assert_eq!(d, direct);
}

#[test]
fn graded_truncated_residual_is_the_hybrid_jacobiator() {
    let (a, b, cc) = counterexample();
    let truncated = graded_jacobi_residual(2, &a, &b, &cc, Some(1));
    assert!(!truncated.is_zero());
    let j = jacobiator(BracketKind::StandardHybrid, &a, &b, &cc);
    // (1/iħ)^2 · ħ^2 · R = -R
    assert_eq!(truncated, -&j);
    assert!(graded_jacobi_residual(2, &a, &b, &cc, None).is_zero());
}

#[test]
fn zero_and_c_numbers() {
    let zero = Observable::<Scalar>::zero(D);
    let one = Observable::<Scalar>::one(D);
    let a = &m(2, 1, 1, 0) + &m(0, 1, 0, 3);
    for kind in [
        BracketKind::Quantum,
        BracketKind::Poisson,
        BracketKind::StandardHybrid,
        BracketKind::AndersonHybrid,
    ] {
        assert!(bracket(kind, &zero, &a).is_zero());
        assert!(bracket(kind, &a, &zero).is_zero());
    }
    for kind in [BracketKind::Quantum, BracketKind::Poisson, BracketKind::StandardHybrid] {
        assert!(bracket(kind, &one, &a).is_zero());
    }
    assert_eq!(zero.sector(), Sector::CNumber);
}

#[test]
fn anderson_is_not_antisymmetric() {
    let a = BracketKind::AndersonHybrid;
    assert!(!a.is_antisymmetric());
    let (u, v) = (m(1, 0, 1, 0), m(0, 1, 0, 1));
    assert_ne!(bracket(a, &u, &v), -&bracket(a, &v, &u));
}

#[test]
fn classification() {
    assert_eq!(m(0, 0, 0, 0).sector(), Sector::CNumber);
    assert_eq!(m(0, 0, 2, 1).sector(), Sector::Classical);
    assert_eq!(m(1, 2, 0, 0).sector(), Sector::Quantum);
    assert_eq!((&m(1, 0, 0, 0) + &m(0, 0, 1, 0)).sector(), Sector::Mixed);
}

#[test]
fn multi_dof_commutation() {
    let d = Dims::new(2, 1);
    let q1 = Observable::<Scalar>::var(d, Var::Q(0));
    let p2 = Observable::<Scalar>::var(d, Var::P(1));
    let p1 = Observable::<Scalar>::var(d, Var::P(0));
    assert!(qbracket(&q1, &p2).is_zero());
    assert_eq!(qbracket(&q1, &p1), Observable::one(d));
    assert_eq!(&p2 * &q1, &q1 * &p2);
}

#[test]
fn lift_restores_hbar() {
    let (a, b, cc) = counterexample();
    let j = jacobiator(BracketKind::StandardHybrid, &a, &b, &cc);
    let at1 = j.at_unit_hbar().unwrap();
    // weights 2 + 3 + 3 - 4
    assert_eq!(at1.lift_homogeneous(4).unwrap(), j);
    assert!(at1.lift_homogeneous(3).is_none());
}

// ---------------------------------------------------------------------------
// Randomized laws.

fn small_gaussian() -> impl Strategy<Value = GaussianRational> {
    (-3i64..=3, 1i64..=3, -3i64..=3, 1i64..=3).prop_map(|(a, b, c, d)| {
        let re = GaussianRational::from_ratio(a, b);
        let im = GaussianRational::from_ratio(c, d).mul_i();
        &re + &im
    })
}

fn scalar_coeff() -> impl Strategy<Value = Scalar> {
    (small_gaussian(), 0u32..=1).prop_map(|(g, a)| Scalar::term(g, a, 0))
}

/// Random observable with `terms` terms of degree ≤ `max_deg` in the
/// selected variables.
fn observable(max_deg: u32, max_terms: usize, quantum: bool, classical: bool) -> impl Strategy<Value = Observable> {
    let qmax = if quantum { max_deg } else { 0 };
    let cmax = if classical { max_deg } else { 0 };
    proptest::collection::vec(
        ((0..=qmax, 0..=qmax, 0..=cmax, 0..=cmax), scalar_coeff()),
        0..=max_terms,
    )
    .prop_map(move |ts| {
        let mut out = Observable::zero(D);
        for ((r, s, t, l), coef) in ts {
            let (mut r, mut s, mut t, mut l) = (r, s, t, l);
            while r + s + t + l > max_deg {
                if r > 0 {
                    r -= 1;
                } else if s > 0 {
                    s -= 1;
                } else if t > 0 {
                    t -= 1;
                } else {
                    l -= 1;
                }
            }
            out.add_term(Monomial::qpxk(r, s, t, l), &coef);
        }
        out
    })
}

fn any_obs(max_deg: u32) -> impl Strategy<Value = Observable> {
    observable(max_deg, 4, true, true)
}

fn hermitize(a: &Observable) -> Observable {
    (a + &a.adjoint()).scale(&half())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiply_is_associative(a in any_obs(5), b in any_obs(5), cc in any_obs(5)) {
        prop_assert_eq!(&(&a * &b) * &cc, &a * &(&b * &cc));
    }

    #[test]
    fn adjoint_laws(a in any_obs(4), b in any_obs(4)) {
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
    }

    #[test]
    fn brackets_antisymmetric_and_bilinear(a in any_obs(4), b in any_obs(4), cc in any_obs(3), g in small_gaussian()) {
        for kind in [BracketKind::Quantum, BracketKind::Poisson, BracketKind::StandardHybrid] {
            let ab = bracket(kind, &a, &b);
            if kind != BracketKind::Poisson {
                prop_assert_eq!(&ab, &(-&bracket(kind, &b, &a)));
            }
            let lhs = bracket(kind, &(&a + &cc.scale_gaussian(&g)), &b);
            let rhs = &ab + &bracket(kind, &cc, &b).scale_gaussian(&g);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn poisson_antisymmetric_on_commuting(a in observable(4, 4, false, true), b in observable(4, 4, false, true)) {
        prop_assert_eq!(poisson(&a, &b), -&poisson(&b, &a));
    }

    #[test]
    fn quantum_bracket_is_lie_and_derivation(a in any_obs(3), b in any_obs(3), h in any_obs(3)) {
        prop_assert!(jacobiator(BracketKind::Quantum, &a, &b, &h).is_zero());
        prop_assert!(leibniz_defect(BracketKind::Quantum, &a, &b, &h).is_zero());
    }

    #[test]
    fn poisson_is_lie_and_derivation_on_classical(
        a in observable(3, 4, false, true),
        b in observable(3, 4, false, true),
        h in observable(3, 4, false, true),
    ) {
        prop_assert!(jacobiator(BracketKind::Poisson, &a, &b, &h).is_zero());
        prop_assert!(leibniz_defect(BracketKind::Poisson, &a, &b, &h).is_zero());
    }

    #[test]
    fn standard_hybrid_axioms(a in any_obs(4), cl in observable(3, 3, false, true), qu in observable(3, 3, true, false)) {
        let s = BracketKind::StandardHybrid;
        prop_assert_eq!(bracket(s, &a, &cl), poisson(&a, &cl));
        prop_assert_eq!(bracket(s, &a, &qu), qbracket(&a, &qu));
    }

    #[test]
    fn standard_hybrid_preserves_hermiticity(a in any_obs(3), b in any_obs(3)) {
        let (ha, hb) = (hermitize(&a), hermitize(&b));
        prop_assert!(ha.is_hermitian());
        let s = bracket(BracketKind::StandardHybrid, &ha, &hb);
        prop_assert_eq!(s.adjoint(), s);
    }

    #[test]
    fn star_order_zero_is_multiply(a in any_obs(4), b in any_obs(4)) {
        prop_assert_eq!(star_multiply(&a, &b, 0), &a * &b);
    }

    #[test]
    fn star_without_classical_sector(a in observable(4, 4, true, false), b in observable(4, 4, true, false), n in 0u32..4) {
        let dq = Dims::new(1, 0);
        let shrink = |o: &Observable| Observable::from_terms(dq, o.terms().map(|(mm, cc)| {
            (Monomial::from_exponents(mm.exponents()[..2].to_vec()), cc.clone())
        }));
        let (a0, b0) = (shrink(&a), shrink(&b));
        prop_assert_eq!(star_multiply(&a0, &b0, n), &a0 * &b0);
    }

    #[test]
    fn star_associative_order_by_order(a in any_obs(3), b in any_obs(3), cc in any_obs(3)) {
        let left = star_multiply(&star_multiply(&a, &b, 4), &cc, 4);
        let right = star_multiply(&a, &star_multiply(&b, &cc, 4), 4);
        let diff = &left - &right;
        for n in 0..=4 {
            prop_assert!(diff.hbarc_coefficient(n).is_zero(), "order {}", n);
        }
    }

    #[test]
    fn truncated_expansion_reproduces_standard_hybrid(a in any_obs(4), b in any_obs(4)) {
        let c0 = cn_coefficient(0, &a, &b);
        let c1 = cn_coefficient(1, &a, &b);
        // ħ_c → ħ before dividing by iħ
        let sum = (&c0 + &c1.scale(&Scalar::hbarc())).substitute_hbarc_with_hbar();
        prop_assert_eq!(qbracket_like(&sum), bracket(BracketKind::StandardHybrid, &a, &b));
    }

    #[test]
    fn truncated_residual_matches_jacobiator(a in any_obs(3), b in any_obs(3), cc in any_obs(3)) {
        let r = graded_jacobi_residual(2, &a, &b, &cc, Some(1));
        prop_assert_eq!(r, -&jacobiator(BracketKind::StandardHybrid, &a, &b, &cc));
    }
}

/// Divide every coefficient by iħ.
fn qbracket_like(a: &Observable) -> Observable {
    a.map_coeffs(|c| c.div_i_hbar().expect("divisible"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn graded_identities_hold_for_full_series(a in any_obs(3), b in any_obs(3), cc in any_obs(3)) {
        for order in 0..=2 {
            prop_assert!(graded_jacobi_residual(order, &a, &b, &cc, None).is_zero());
        }
    }
}
