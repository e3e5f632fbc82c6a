//! Star product in the classical sector and its ℏ_c expansion.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{falling, Dims, Monomial, Observable, Var};
use crate::scalar::{GaussianRational, Scalar};

/// One term of the bidifferential expansion for a single classical dof:
/// `α` contractions of `∂x` on the left with `∂k` on the right and `β` of
/// `∂k` on the left with `∂x` on the right.
#[derive(Clone, Copy)]
struct Contraction {
    alpha: u32,
    beta: u32,
}

/// `A ⋆ B` truncated after ℏ_c^order.
///
/// Implements `exp(½ iℏ_c (∂x^A·∂k^B - ∂k^A·∂x^B)) A B` term by term;
/// derivatives act on the classical factors only and `A` stays left of `B`
/// in the quantum product.
pub fn star_multiply(a: &Observable, b: &Observable, order: u32) -> Observable {
    let d = a.dims();
    assert_eq!(d, b.dims(), "observables with different degrees of freedom");
    let mut out = Observable::zero(d);
    for (m1, c1) in a.terms() {
        for (m2, c2) in b.terms() {
            let coef = c1 * c2;
            for (w, n, l, r) in pair_expansion(d, m1, m2, order) {
                // (i/2)^n ℏ_c^n · w
                let unit = i_over_two_pow(n);
                let factor = Scalar::term(&unit * &GaussianRational::real(w), 0, n);
                let prod = &Observable::monomial(d, l) * &Observable::monomial(d, r);
                out.add_scaled(&prod, &(&coef * &factor));
            }
        }
    }
    out
}

/// The untruncated star product (finite for polynomials).
pub fn star_multiply_full(a: &Observable, b: &Observable) -> Observable {
    let order = a.classical_degree() + b.classical_degree();
    star_multiply(a, b, order)
}

/// `A ⋆ B - B ⋆ A`, untruncated.
pub fn star_commutator(a: &Observable, b: &Observable) -> Observable {
    &star_multiply_full(a, b) - &star_multiply_full(b, a)
}

/// Coefficient `C_n(A, B)` of ℏ_c^n in the star commutator.
pub fn cn_coefficient(n: u32, a: &Observable, b: &Observable) -> Observable {
    star_commutator(a, b).hbarc_coefficient(n)
}

/// `Σ_{a+b=m} C_a(C_b(A,B),C)` plus cyclic permutations.
///
/// With `truncation = Some(t)` every `C_n` with `n > t` is treated as zero,
/// which models brackets built from a truncated star commutator.
pub fn graded_jacobi_residual(
    m: u32,
    a: &Observable,
    b: &Observable,
    c: &Observable,
    truncation: Option<u32>,
) -> Observable {
    let keep = |n: u32| truncation.is_none_or(|t| n <= t);
    let d = a.dims();
    let mut out = Observable::zero(d);
    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
        for inner in 0..=m {
            let outer = m - inner;
            if !keep(inner) || !keep(outer) {
                continue;
            }
            let xy = cn_coefficient(inner, x, y);
            out = &out + &cn_coefficient(outer, &xy, z);
        }
    }
    out
}

fn i_over_two_pow(n: u32) -> GaussianRational {
    let unit = match n % 4 {
        0 => GaussianRational::one(),
        1 => GaussianRational::i(),
        2 => -GaussianRational::one(),
        _ => -GaussianRational::i(),
    };
    let den = BigInt::one() << n as usize;
    &unit * &GaussianRational::real(BigRational::new(BigInt::one(), den))
}

/// All contraction patterns for a monomial pair with total order ≤ `order`.
/// Each entry is `(weight, n, left, right)`; the weight already includes
/// `(-1)^β / (α! β!)` and the falling-factorial derivative factors.
fn pair_expansion(d: Dims, m1: &Monomial, m2: &Monomial, order: u32) -> Vec<(BigRational, u32, Monomial, Monomial)> {
    let mut per_dof: Vec<Vec<Contraction>> = Vec::with_capacity(d.classical);
    for j in 0..d.classical {
        let (tx1, tk1) = (m1.exponent(d, Var::X(j)), m1.exponent(d, Var::K(j)));
        let (tx2, tk2) = (m2.exponent(d, Var::X(j)), m2.exponent(d, Var::K(j)));
        let mut opts = Vec::new();
        for alpha in 0..=tx1.min(tk2) {
            for beta in 0..=tk1.min(tx2) {
                opts.push(Contraction { alpha, beta });
            }
        }
        per_dof.push(opts);
    }

    let mut out = Vec::new();
    let mut choice = vec![Contraction { alpha: 0, beta: 0 }; d.classical];
    fn rec(
        j: usize,
        used: u32,
        order: u32,
        per_dof: &[Vec<Contraction>],
        choice: &mut Vec<Contraction>,
        emit: &mut dyn FnMut(&[Contraction], u32),
    ) {
        if j == per_dof.len() {
            emit(choice, used);
            return;
        }
        for c in &per_dof[j] {
            let n = used + c.alpha + c.beta;
            if n > order {
                continue;
            }
            choice[j] = *c;
            rec(j + 1, n, order, per_dof, choice, emit);
        }
    }
    let mut emit = |cs: &[Contraction], n: u32| {
        let mut w = BigRational::one();
        let mut left = m1.clone();
        let mut right = m2.clone();
        for (j, c) in cs.iter().enumerate() {
            let (tx1, tk1) = (m1.exponent(d, Var::X(j)), m1.exponent(d, Var::K(j)));
            let (tx2, tk2) = (m2.exponent(d, Var::X(j)), m2.exponent(d, Var::K(j)));
            let num = falling(tx1, c.alpha) * falling(tk1, c.beta) * falling(tk2, c.alpha) * falling(tx2, c.beta);
            let den = falling(c.alpha, c.alpha) * falling(c.beta, c.beta);
            let mut f = BigRational::new(num, den);
            if c.beta % 2 == 1 {
                f = -f;
            }
            w *= f;
            left = left
                .with_exponent(d, Var::X(j), tx1 - c.alpha)
                .with_exponent(d, Var::K(j), tk1 - c.beta);
            right = right
                .with_exponent(d, Var::K(j), tk2 - c.alpha)
                .with_exponent(d, Var::X(j), tx2 - c.beta);
        }
        out.push((w, n, left, right));
    };
    rec(0, 0, order, &per_dof, &mut choice, &mut emit);
    out
}
