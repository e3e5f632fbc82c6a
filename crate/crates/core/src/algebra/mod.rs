//! Exact noncommutative algebra of mixed quantum-classical observables.
//!
//! Quantum variables obey `[q_i, p_j] = iℏ δ_ij`; classical variables commute
//! with everything. Every observable is kept in normal order (`q` left of `p`)
//! over a [`Coeff`] ring, so equality of observables is structural.

mod monomial;
mod star;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

pub(crate) use monomial::falling;
pub use monomial::{Dims, Monomial, Sector, Var};
pub use star::{cn_coefficient, graded_jacobi_residual, star_commutator, star_multiply, star_multiply_full};

use crate::error::AlgebraError;
use crate::scalar::{Coeff, GaussianRational, Scalar};

/// Finite linear combination of normal-ordered monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Observable<R: Coeff = Scalar> {
    dims: Dims,
    terms: BTreeMap<Monomial, R>,
}

impl<R: Coeff> Observable<R> {
    pub fn zero(dims: Dims) -> Self {
        Self {
            dims,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dims: Dims, c: R) -> Self {
        Self::term(dims, Monomial::one(dims), c)
    }

    pub fn one(dims: Dims) -> Self {
        Self::constant(dims, R::one())
    }

    pub fn var(dims: Dims, var: Var) -> Self {
        Self::term(dims, Monomial::var(dims, var), R::one())
    }

    pub fn monomial(dims: Dims, m: Monomial) -> Self {
        Self::term(dims, m, R::one())
    }

    pub fn term(dims: Dims, m: Monomial, c: R) -> Self {
        debug_assert_eq!(m.exponents().len(), dims.width());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { dims, terms }
    }

    pub fn from_terms(dims: Dims, terms: impl IntoIterator<Item = (Monomial, R)>) -> Self {
        let mut out = Self::zero(dims);
        for (m, c) in terms {
            out.add_term(m, &c);
        }
        out
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&R> {
        self.terms.get(m)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn classical_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.classical_degree(self.dims))
            .max()
            .unwrap_or(0)
    }

    /// Classification by support: c-number, purely classical, purely quantum
    /// or mixed. The zero observable is a c-number.
    pub fn sector(&self) -> Sector {
        let mut quantum = false;
        let mut classical = false;
        for m in self.terms.keys() {
            quantum |= m.quantum_degree(self.dims) > 0;
            classical |= m.classical_degree(self.dims) > 0;
        }
        match (quantum, classical) {
            (false, false) => Sector::CNumber,
            (false, true) => Sector::Classical,
            (true, false) => Sector::Quantum,
            (true, true) => Sector::Mixed,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: &R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.add_ref(c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &R) {
        self.check_dims(other);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &c.mul_ref(factor));
        }
    }

    pub fn scale(&self, factor: &R) -> Self {
        let mut out = Self::zero(self.dims);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.mul_ref(factor));
        }
        out
    }

    pub fn scale_gaussian(&self, factor: &GaussianRational) -> Self {
        self.scale(&R::from_gaussian(factor.clone()))
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> Observable<S> {
        let mut out = Observable::zero(self.dims);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    fn check_dims(&self, other: &Self) {
        assert_eq!(self.dims, other.dims, "observables with different degrees of freedom");
    }

    /// Normal-ordered product; fails only on a dimension mismatch.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.dims != rhs.dims {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dims,
                right: rhs.dims,
            });
        }
        let mut out = Self::zero(self.dims);
        let mut powers: Vec<R> = Vec::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let c12 = c1.mul_ref(c2);
                for (n, j, m) in m1.normal_product(m2, self.dims) {
                    while powers.len() <= j as usize {
                        powers.push(R::neg_i_hbar_pow(powers.len() as u32));
                    }
                    let w = R::from_gaussian(GaussianRational::real(n.into()));
                    out.add_term(m, &c12.mul_ref(&w).mul_ref(&powers[j as usize]));
                }
            }
        }
        Ok(out)
    }

    /// Ordinary partial derivative of the normal-ordered symbol.
    pub fn derivative(&self, var: Var) -> Self {
        let mut out = Self::zero(self.dims);
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.derivative(self.dims, var) {
                out.add_term(dm, &c.scale(&GaussianRational::from_int(e as i64)));
            }
        }
        out
    }

    /// Hermitian adjoint: reverses products, conjugates coefficients.
    pub fn adjoint(&self) -> Self {
        let d = self.dims;
        let mut out = Self::zero(d);
        for (m, c) in &self.terms {
            // (q^r p^s x^t k^l)^† = p^s q^r x^t k^l
            let mut ps = Monomial::one(d);
            let mut rest = m.clone();
            for i in 0..d.quantum {
                let s = m.exponent(d, Var::P(i));
                ps = ps.with_exponent(d, Var::P(i), s);
                rest = rest.with_exponent(d, Var::P(i), 0);
            }
            let reordered = Self::monomial(d, ps)
                .try_mul(&Self::monomial(d, rest))
                .expect("same dims");
            out.add_scaled(&reordered, &c.conj());
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }

    /// Quantum commutator `AB - BA`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &(self * rhs) - &(rhs * self)
    }
}

impl Observable<Scalar> {
    /// Substitute ℏ_c → ℏ in every coefficient.
    pub fn substitute_hbarc_with_hbar(&self) -> Self {
        self.map_coeffs(Scalar::substitute_hbarc_with_hbar)
    }

    /// Set ℏ = 1. Fails if any coefficient still depends on ℏ_c.
    pub fn at_unit_hbar(&self) -> Option<Observable<GaussianRational>> {
        let mut out = Observable::zero(self.dims);
        for (m, c) in &self.terms {
            if c.max_hbarc_power() > 0 {
                return None;
            }
            out.add_term(m.clone(), &c.at_unit());
        }
        Some(out)
    }

    /// Coefficient of ℏ_c^n of every term, with ℏ_c removed.
    pub fn hbarc_coefficient(&self, n: u32) -> Self {
        self.map_coeffs(|c| c.hbarc_coefficient(n))
    }

    pub fn max_hbarc_power(&self) -> u32 {
        self.terms.values().map(Scalar::max_hbarc_power).max().unwrap_or(0)
    }
}

impl Observable<GaussianRational> {
    /// Reinstate ℏ in an observable computed at ℏ = 1.
    ///
    /// Assigning weight 1 to `q, p, x, k` and weight 2 to ℏ, every bracket of
    /// weight-homogeneous arguments is homogeneous of weight `w_A + w_B - 2`;
    /// a term of degree `d` in a result of weight `w` therefore carries
    /// ℏ^((w - d)/2). Returns `None` if the parity or sign does not allow it.
    pub fn lift_homogeneous(&self, weight: u32) -> Option<Observable<Scalar>> {
        let mut out = Observable::zero(self.dims);
        for (m, c) in &self.terms {
            let d = m.degree();
            if d > weight || !(weight - d).is_multiple_of(2) {
                return None;
            }
            out.add_term(m.clone(), &Scalar::term(c.clone(), (weight - d) / 2, 0));
        }
        Some(out)
    }
}

impl<R: Coeff> fmt::Debug for Observable<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{:?}]{:?}", c, m.exponents())?;
        }
        Ok(())
    }
}

impl<R: Coeff> Add for &Observable<R> {
    type Output = Observable<R>;
    fn add(self, rhs: &Observable<R>) -> Observable<R> {
        let mut out = self.clone();
        out.add_scaled(rhs, &R::one());
        out
    }
}

impl<R: Coeff> Sub for &Observable<R> {
    type Output = Observable<R>;
    fn sub(self, rhs: &Observable<R>) -> Observable<R> {
        let mut out = self.clone();
        out.add_scaled(rhs, &R::one().neg_ref());
        out
    }
}

impl<R: Coeff> Neg for &Observable<R> {
    type Output = Observable<R>;
    fn neg(self) -> Observable<R> {
        self.scale(&R::one().neg_ref())
    }
}

/// # Panics
/// On a dimension mismatch; use [`Observable::try_mul`] to get an error instead.
impl<R: Coeff> Mul for &Observable<R> {
    type Output = Observable<R>;
    fn mul(self, rhs: &Observable<R>) -> Observable<R> {
        match self.try_mul(rhs) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<R: Coeff> $tr for Observable<R> {
            type Output = Observable<R>;
            fn $m(self, rhs: Observable<R>) -> Observable<R> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Exact normal-ordered product.
pub fn multiply<R: Coeff>(a: &Observable<R>, b: &Observable<R>) -> Result<Observable<R>, AlgebraError> {
    a.try_mul(b)
}

pub fn adjoint<R: Coeff>(a: &Observable<R>) -> Observable<R> {
    a.adjoint()
}

/// `Σ_j ∂A/∂x_j · ∂B/∂k_j - ∂A/∂k_j · ∂B/∂x_j`, factors kept in written order.
pub fn poisson<R: Coeff>(a: &Observable<R>, b: &Observable<R>) -> Observable<R> {
    let d = a.dims();
    let mut out = Observable::zero(d);
    for j in 0..d.classical {
        let ax = a.derivative(Var::X(j));
        let bk = b.derivative(Var::K(j));
        let ak = a.derivative(Var::K(j));
        let bx = b.derivative(Var::X(j));
        out = &out + &(&(&ax * &bk) - &(&ak * &bx));
    }
    out
}

/// `(AB - BA) / iℏ`.
pub fn qbracket<R: Coeff>(a: &Observable<R>, b: &Observable<R>) -> Observable<R> {
    let comm = a.commutator(b);
    let d = comm.dims();
    let mut out = Observable::zero(d);
    for (m, c) in comm.terms() {
        // Every term of a normal-ordered commutator carries at least one ℏ.
        let q = c
            .div_i_hbar()
            .expect("commutator of normal-ordered polynomials is divisible by iħ");
        out.add_term(m.clone(), &q);
    }
    out
}

/// The dynamical brackets on mixed observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BracketKind {
    /// `(A,B)_q = [A,B]/iℏ`
    Quantum,
    /// `{A,B}` with order-preserving products
    Poisson,
    /// `(A,B)_q + ½({A,B} - {B,A})`
    StandardHybrid,
    /// `(A,B)_q + {A,B}`; not antisymmetric
    AndersonHybrid,
}

impl BracketKind {
    pub fn is_antisymmetric(self) -> bool {
        !matches!(self, BracketKind::AndersonHybrid)
    }
}

pub fn bracket<R: Coeff>(kind: BracketKind, a: &Observable<R>, b: &Observable<R>) -> Observable<R> {
    match kind {
        BracketKind::Quantum => qbracket(a, b),
        BracketKind::Poisson => poisson(a, b),
        BracketKind::StandardHybrid => {
            let half = R::from_gaussian(GaussianRational::from_ratio(1, 2));
            let anti = (&poisson(a, b) - &poisson(b, a)).scale(&half);
            &qbracket(a, b) + &anti
        }
        BracketKind::AndersonHybrid => &qbracket(a, b) + &poisson(a, b),
    }
}

/// `((A,B),C) + ((B,C),A) + ((C,A),B)`
pub fn jacobiator<R: Coeff>(
    kind: BracketKind,
    a: &Observable<R>,
    b: &Observable<R>,
    c: &Observable<R>,
) -> Observable<R> {
    let br = |x: &Observable<R>, y: &Observable<R>| bracket(kind, x, y);
    &(&br(&br(a, b), c) + &br(&br(b, c), a)) + &br(&br(c, a), b)
}

/// `(AB, H) - (A, H) B - A (B, H)`
pub fn leibniz_defect<R: Coeff>(
    kind: BracketKind,
    a: &Observable<R>,
    b: &Observable<R>,
    h: &Observable<R>,
) -> Observable<R> {
    let ab_h = bracket(kind, &(a * b), h);
    let a_h_b = &bracket(kind, a, h) * b;
    let a_b_h = a * &bracket(kind, b, h);
    &(&ab_h - &a_h_b) - &a_b_h
}

#[cfg(test)]
mod tests;
