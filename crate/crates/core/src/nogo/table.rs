use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::affine::{AffineObservable, AffineScalar, UnknownId};
use crate::algebra::{poisson, qbracket, Dims, Monomial, Observable, Sector, Var};
use crate::error::NoGoError;
use crate::scalar::{Coeff, GaussianRational};

/// The verifier works with one quantum and one classical degree of freedom.
pub const DIMS: Dims = Dims::ONE_ONE;

/// Degree-`n` basis monomials of the given sector family, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `C_n`: purely classical.
    Classical(u32),
    /// `Q_n`: purely quantum.
    Quantum(u32),
    /// `M_n`: mixed.
    Mixed(u32),
    /// `A_n`: any.
    Any(u32),
}

impl Family {
    pub fn degree(self) -> u32 {
        match self {
            Family::Classical(n) | Family::Quantum(n) | Family::Mixed(n) | Family::Any(n) => n,
        }
    }

    pub fn basis(self) -> Vec<Monomial> {
        let n = self.degree();
        Monomial::all_of_degree(DIMS, n)
            .into_iter()
            .filter(|m| match self {
                Family::Classical(_) => m.sector(DIMS) == Sector::Classical,
                Family::Quantum(_) => m.sector(DIMS) == Sector::Quantum,
                Family::Mixed(_) => m.sector(DIMS) == Sector::Mixed,
                Family::Any(_) => true,
            })
            .collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Classical(n) => write!(f, "C{n}"),
            Family::Quantum(n) => write!(f, "Q{n}"),
            Family::Mixed(n) => write!(f, "M{n}"),
            Family::Any(n) => write!(f, "A{n}"),
        }
    }
}

/// All degree-`n` mixed basis monomials (`r+s > 0` and `t+l > 0`).
pub fn mixed_basis(n: u32) -> Vec<Monomial> {
    Family::Mixed(n).basis()
}

/// A class of Jacobi triples such as `<M2, M2, Q2>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TripleClass(pub Family, pub Family, pub Family);

pub type Triple = [Monomial; 3];

impl TripleClass {
    /// Concrete triples in canonical order. When two slots share a family,
    /// only strictly increasing assignments are kept: the jacobiator is
    /// alternating, so the others are redundant or trivially zero.
    pub fn triples(&self) -> Vec<Triple> {
        let fams = [self.0, self.1, self.2];
        let bases: Vec<Vec<Monomial>> = fams.iter().map(|f| f.basis()).collect();
        let mut out = Vec::new();
        for a in &bases[0] {
            for b in &bases[1] {
                if fams[0] == fams[1] && a >= b {
                    continue;
                }
                for c in &bases[2] {
                    if (fams[1] == fams[2] && b >= c) || (fams[0] == fams[2] && a >= c) {
                        continue;
                    }
                    out.push([a.clone(), b.clone(), c.clone()]);
                }
            }
        }
        out
    }
}

impl fmt::Display for TripleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{},{}>", self.0, self.1, self.2)
    }
}

/// `(A, P)` for purely classical or purely quantum `P`, extended linearly
/// over the unknowns of `A`.
pub fn axiom_bracket<R: Coeff>(a: &AffineObservable<R>, p: &Observable<R>) -> Result<AffineObservable<R>, NoGoError> {
    let base = axiom_concrete(&a.base(), p)?;
    let mut parts = BTreeMap::new();
    for (u, part) in a.unknown_parts() {
        parts.insert(u, axiom_concrete(&part, p)?);
    }
    Ok(AffineObservable::from_parts(&base, &parts))
}

fn axiom_concrete<R: Coeff>(a: &Observable<R>, p: &Observable<R>) -> Result<Observable<R>, NoGoError> {
    match p.sector() {
        Sector::CNumber => Ok(Observable::zero(a.dims())),
        Sector::Classical => Ok(poisson(a, p)),
        Sector::Quantum => Ok(qbracket(a, p)),
        Sector::Mixed => Err(NoGoError::MixedAxiomArgument),
    }
}

/// The polynomial `B` with `(B,q) = gq`, `(B,p) = gp`, `(B,x) = gx`,
/// `(B,k) = gk`, plus the additive constant `fresh · 1`.
///
/// Under the axioms `(B,q) = -∂B/∂p`, `(B,p) = ∂B/∂q`, `(B,x) = -∂B/∂k`
/// and `(B,k) = ∂B/∂x`. Integration is coefficient-wise and the result is
/// differentiated back, so any non-integrable gradient is reported.
pub fn reconstruct_from_partials<R: Coeff>(
    gq: &AffineObservable<R>,
    gp: &AffineObservable<R>,
    gx: &AffineObservable<R>,
    gk: &AffineObservable<R>,
    fresh: UnknownId,
) -> Result<AffineObservable<R>, NoGoError> {
    let parts = [gq, gp, gx, gk];
    let mut keys: Vec<Option<UnknownId>> = alloc::vec![None];
    for g in parts {
        for u in g.unknowns() {
            if !keys.contains(&Some(u)) {
                keys.push(Some(u));
            }
        }
    }
    let component = |g: &AffineObservable<R>, key: Option<UnknownId>| match key {
        None => g.base(),
        Some(u) => g
            .unknown_parts()
            .remove(&u)
            .unwrap_or_else(|| Observable::zero(g.dims())),
    };
    let d = gq.dims();
    let minus = R::one().neg_ref();
    let mut base = Observable::zero(d);
    let mut unknown_parts = BTreeMap::new();
    for key in keys {
        let grads = [
            (Var::Q(0), component(gp, key)),
            (Var::P(0), component(gq, key).scale(&minus)),
            (Var::X(0), component(gk, key)),
            (Var::K(0), component(gx, key).scale(&minus)),
        ];
        let b = integrate(d, &grads)?;
        match key {
            None => base = b,
            Some(u) => {
                unknown_parts.insert(u, b);
            }
        }
    }
    let mut out = AffineObservable::from_parts(&base, &unknown_parts);
    out.add_assign(&AffineObservable::unknown_constant(d, fresh));
    Ok(out)
}

/// Polynomial with prescribed partial derivatives and zero constant term.
pub(crate) fn integrate<R: Coeff>(d: Dims, grads: &[(Var, Observable<R>)]) -> Result<Observable<R>, NoGoError> {
    let mut candidate: BTreeMap<Monomial, R> = BTreeMap::new();
    for (var, g) in grads {
        for (m, c) in g.terms() {
            let up = m.times_var(d, *var);
            let e = up.exponent(d, *var) as i64;
            let val = c.scale(&GaussianRational::from_ratio(1, e));
            match candidate.get(&up) {
                Some(prev) if *prev != val => {
                    return Err(NoGoError::Integrability(format!(
                        "mixed partials disagree at exponents {:?}",
                        up.exponents()
                    )));
                }
                Some(_) => {}
                None => {
                    candidate.insert(up, val);
                }
            }
        }
    }
    let b = Observable::from_terms(d, candidate);
    for (var, g) in grads {
        if b.derivative(*var) != *g {
            return Err(NoGoError::Integrability(format!(
                "derivative along {:?} is not reproduced",
                var
            )));
        }
    }
    Ok(b)
}

fn pair_label(a: &Monomial, b: &Monomial) -> String {
    format!("({:?}, {:?})", a.exponents(), b.exponents())
}

/// Partially determined bracket table on mixed basis pairs.
///
/// Only one orientation `(M, M')` with `M < M'` is stored; the other follows
/// by antisymmetry. Brackets with a pure argument come from the axioms and
/// are never stored.
#[derive(Clone)]
pub struct BracketTable<R: Coeff = GaussianRational> {
    entries: BTreeMap<(Monomial, Monomial), AffineObservable<R>>,
    resolved: BTreeMap<UnknownId, R>,
    unknown_of: BTreeMap<(Monomial, Monomial), UnknownId>,
    next_unknown: u32,
}

impl<R: Coeff> Default for BracketTable<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Coeff> BracketTable<R> {
    pub fn new() -> Self {
        Self {
            entries: BTreeMap::new(),
            resolved: BTreeMap::new(),
            unknown_of: BTreeMap::new(),
            next_unknown: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &AffineObservable<R>)> {
        self.entries.iter()
    }

    pub fn resolved(&self) -> &BTreeMap<UnknownId, R> {
        &self.resolved
    }

    pub fn unknown_count(&self) -> usize {
        self.next_unknown as usize
    }

    /// The unknown constant introduced for a stored pair.
    pub fn unknown_for(&self, a: &Monomial, b: &Monomial) -> Option<UnknownId> {
        self.unknown_of.get(&ordered(a, b).0).copied()
    }

    /// Insert a fully known entry (used to lift a resolved table).
    pub fn insert_concrete(&mut self, a: Monomial, b: Monomial, value: &Observable<R>) {
        let ((a, b), flip) = ordered(&a, &b);
        let v = AffineObservable::from_observable(value);
        self.entries.insert((a, b), if flip { v.neg() } else { v });
    }

    pub fn entry(&self, a: &Monomial, b: &Monomial) -> Option<AffineObservable<R>> {
        let (key, flip) = ordered(a, b);
        self.entries.get(&key).map(|v| if flip { v.neg() } else { v.clone() })
    }

    /// `(a, b)` for basis monomials.
    pub fn bracket_monomials(&self, a: &Monomial, b: &Monomial) -> Result<AffineObservable<R>, NoGoError> {
        let (sa, sb) = (a.sector(DIMS), b.sector(DIMS));
        if sb.is_pure() {
            let a_obs = Observable::<R>::monomial(DIMS, a.clone());
            let b_obs = Observable::<R>::monomial(DIMS, b.clone());
            return Ok(AffineObservable::from_observable(&axiom_concrete(&a_obs, &b_obs)?));
        }
        if sa.is_pure() {
            return Ok(self.bracket_monomials(b, a)?.neg());
        }
        if a == b {
            return Ok(AffineObservable::zero(DIMS));
        }
        self.entry(a, b)
            .ok_or_else(|| NoGoError::MissingEntry(pair_label(a, b)))
    }

    /// Bilinear extension to concrete observables.
    pub fn bracket(&self, a: &Observable<R>, b: &Observable<R>) -> Result<AffineObservable<R>, NoGoError> {
        let mut out = AffineObservable::zero(DIMS);
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let v = self.bracket_monomials(ma, mb)?;
                out.add_assign(&v.scale(&ca.mul_ref(cb)));
            }
        }
        Ok(out)
    }

    /// `(X, C)` with `X` affine. Each unknown-bearing part of `X` must
    /// bracket to an unknown-free value; otherwise the expansion would
    /// multiply two unknowns.
    pub fn bracket_affine(&self, x: &AffineObservable<R>, c: &Observable<R>) -> Result<AffineObservable<R>, NoGoError> {
        let mut out = self.bracket(&x.base(), c)?;
        for (u, part) in x.unknown_parts() {
            let v = self.bracket(&part, c)?;
            if !v.is_concrete() {
                return Err(NoGoError::AffineViolation(format!("unknown {u}")));
            }
            for (m, coef) in v.base().terms() {
                out.add_term(m.clone(), &AffineScalar::unknown(u).scale(coef));
            }
        }
        Ok(out)
    }

    /// `((A,B),C) + ((B,C),A) + ((C,A),B)` on basis triples.
    pub fn jacobiator(&self, t: &Triple) -> Result<AffineObservable<R>, NoGoError> {
        let obs = |m: &Monomial| Observable::<R>::monomial(DIMS, m.clone());
        let (a, b, c) = (obs(&t[0]), obs(&t[1]), obs(&t[2]));
        let mut out = AffineObservable::zero(DIMS);
        for (x, y, z) in [(&a, &b, &c), (&b, &c, &a), (&c, &a, &b)] {
            let inner = self.bracket(x, y)?;
            out.add_assign(&self.bracket_affine(&inner, z)?);
        }
        Ok(out)
    }

    /// The four brackets `((M, M'), ξ)` for `ξ = q, p, x, k`, obtained from
    /// `((M, ξ), M') + (M, (M', ξ))`.
    pub fn gradient_brackets(&self, a: &Monomial, b: &Monomial) -> Result<[AffineObservable<R>; 4], NoGoError> {
        let ma = Observable::<R>::monomial(DIMS, a.clone());
        let mb = Observable::<R>::monomial(DIMS, b.clone());
        let mut out: [AffineObservable<R>; 4] = core::array::from_fn(|_| AffineObservable::zero(DIMS));
        for (slot, var) in [Var::Q(0), Var::P(0), Var::X(0), Var::K(0)].into_iter().enumerate() {
            let xi = Observable::<R>::var(DIMS, var);
            let a_xi = axiom_concrete(&ma, &xi)?;
            let b_xi = axiom_concrete(&mb, &xi)?;
            let mut g = self.bracket(&a_xi, &mb)?;
            g.add_assign(&self.bracket(&ma, &b_xi)?);
            out[slot] = g;
        }
        Ok(out)
    }

    /// Build the entries for `pairs`, each with one fresh unknown constant.
    pub fn extend(&mut self, pairs: &[(Monomial, Monomial)]) -> Result<Vec<UnknownId>, NoGoError> {
        let mut fresh_ids = Vec::with_capacity(pairs.len());
        let mut staged = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let [gq, gp, gx, gk] = self.gradient_brackets(a, b)?;
            let fresh = UnknownId(self.next_unknown);
            self.next_unknown += 1;
            let entry = reconstruct_from_partials(&gq, &gp, &gx, &gk, fresh)?;
            staged.push((a.clone(), b.clone(), entry, fresh));
            fresh_ids.push(fresh);
        }
        for (a, b, entry, fresh) in staged {
            let ((ka, kb), flip) = ordered(&a, &b);
            let entry = if flip { entry.neg() } else { entry };
            self.unknown_of.insert((ka.clone(), kb.clone()), fresh);
            self.entries.insert((ka, kb), entry);
        }
        Ok(fresh_ids)
    }

    /// Fix unknowns to values and substitute them into every entry.
    pub fn resolve(&mut self, values: &BTreeMap<UnknownId, R>) {
        for (u, v) in values {
            self.resolved.insert(*u, v.clone());
        }
        for entry in self.entries.values_mut() {
            *entry = entry.substitute(values);
        }
    }

    /// One linear equation per monomial coefficient of each jacobiator.
    pub fn impose_jacobi(&self, class: TripleClass) -> Result<Vec<super::Equation<R>>, NoGoError> {
        let mut eqs = Vec::new();
        for t in class.triples() {
            let j = self.jacobiator(&t)?;
            for (m, c) in j.terms() {
                eqs.push(super::Equation {
                    linear: c.linear.clone(),
                    constant: c.base.clone(),
                    provenance: super::Provenance {
                        class,
                        triple: t.clone(),
                        monomial: m.clone(),
                    },
                });
            }
        }
        Ok(eqs)
    }
}

/// Canonical storage key and whether the orientation was flipped.
fn ordered(a: &Monomial, b: &Monomial) -> ((Monomial, Monomial), bool) {
    if a <= b {
        ((a.clone(), b.clone()), false)
    } else {
        ((b.clone(), a.clone()), true)
    }
}
