use alloc::collections::BTreeMap;
use core::fmt;

use crate::algebra::{Dims, Monomial, Observable};
use crate::scalar::{Coeff, GaussianRational};

/// Label of an unknown additive constant in the bracket table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnknownId(pub u32);

impl fmt::Display for UnknownId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}", self.0)
    }
}

/// `base + Σ_u linear[u] · u`
#[derive(Clone, PartialEq, Eq)]
pub struct AffineScalar<R: Coeff = GaussianRational> {
    pub base: R,
    pub linear: BTreeMap<UnknownId, R>,
}

impl<R: Coeff> AffineScalar<R> {
    pub fn constant(base: R) -> Self {
        Self {
            base,
            linear: BTreeMap::new(),
        }
    }

    pub fn unknown(u: UnknownId) -> Self {
        let mut linear = BTreeMap::new();
        linear.insert(u, R::one());
        Self {
            base: R::zero(),
            linear,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.linear.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.linear.is_empty()
    }

    fn add_assign(&mut self, o: &Self) {
        self.base = self.base.add_ref(&o.base);
        for (u, c) in &o.linear {
            add_linear(&mut self.linear, *u, c);
        }
    }

    pub fn scale(&self, f: &R) -> Self {
        let mut linear = BTreeMap::new();
        for (u, c) in &self.linear {
            add_linear(&mut linear, *u, &c.mul_ref(f));
        }
        Self {
            base: self.base.mul_ref(f),
            linear,
        }
    }

    /// Product of two affine scalars; `None` when both carry unknowns.
    pub fn try_mul(&self, o: &Self) -> Option<Self> {
        match (self.is_constant(), o.is_constant()) {
            (false, false) => None,
            (true, _) => Some(o.scale(&self.base)),
            (false, true) => Some(self.scale(&o.base)),
        }
    }

    pub fn substitute(&self, values: &BTreeMap<UnknownId, R>) -> Self {
        let mut out = Self::constant(self.base.clone());
        for (u, c) in &self.linear {
            match values.get(u) {
                Some(v) => out.base = out.base.add_ref(&c.mul_ref(v)),
                None => add_linear(&mut out.linear, *u, c),
            }
        }
        out
    }
}

fn add_linear<R: Coeff>(map: &mut BTreeMap<UnknownId, R>, u: UnknownId, c: &R) {
    if c.is_zero() {
        return;
    }
    let v = map.entry(u).or_insert_with(R::zero);
    *v = v.add_ref(c);
    if v.is_zero() {
        map.remove(&u);
    }
}

impl<R: Coeff> fmt::Debug for AffineScalar<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.base)?;
        for (u, c) in &self.linear {
            write!(f, " + ({:?}){}", c, u)?;
        }
        Ok(())
    }
}

/// Observable whose coefficients are affine in unknown constants.
#[derive(Clone, PartialEq, Eq)]
pub struct AffineObservable<R: Coeff = GaussianRational> {
    dims: Dims,
    terms: BTreeMap<Monomial, AffineScalar<R>>,
}

impl<R: Coeff> AffineObservable<R> {
    pub fn zero(dims: Dims) -> Self {
        Self {
            dims,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_observable(a: &Observable<R>) -> Self {
        let mut out = Self::zero(a.dims());
        for (m, c) in a.terms() {
            out.add_term(m.clone(), &AffineScalar::constant(c.clone()));
        }
        out
    }

    /// The c-number `u · 1`.
    pub fn unknown_constant(dims: Dims, u: UnknownId) -> Self {
        let mut out = Self::zero(dims);
        out.add_term(Monomial::one(dims), &AffineScalar::unknown(u));
        out
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &AffineScalar<R>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_concrete(&self) -> bool {
        self.terms.values().all(AffineScalar::is_constant)
    }

    pub fn add_term(&mut self, m: Monomial, c: &AffineScalar<R>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                v.add_assign(c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn add_observable_scaled(&mut self, o: &Observable<R>, f: &R) {
        for (m, c) in o.terms() {
            self.add_term(m.clone(), &AffineScalar::constant(c.mul_ref(f)));
        }
    }

    pub fn scale(&self, f: &R) -> Self {
        let mut out = Self::zero(self.dims);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.scale(f));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&R::one().neg_ref())
    }

    /// The unknown-free part.
    pub fn base(&self) -> Observable<R> {
        Observable::from_terms(self.dims, self.terms.iter().map(|(m, c)| (m.clone(), c.base.clone())))
    }

    /// The observable multiplying each unknown.
    pub fn unknown_parts(&self) -> BTreeMap<UnknownId, Observable<R>> {
        let mut out: BTreeMap<UnknownId, Observable<R>> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (u, v) in &c.linear {
                out.entry(*u)
                    .or_insert_with(|| Observable::zero(self.dims))
                    .add_term(m.clone(), v);
            }
        }
        out
    }

    pub fn from_parts(base: &Observable<R>, parts: &BTreeMap<UnknownId, Observable<R>>) -> Self {
        let mut out = Self::from_observable(base);
        for (u, part) in parts {
            for (m, c) in part.terms() {
                out.add_term(m.clone(), &AffineScalar::unknown(*u).scale(c));
            }
        }
        out
    }

    pub fn substitute(&self, values: &BTreeMap<UnknownId, R>) -> Self {
        let mut out = Self::zero(self.dims);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.substitute(values));
        }
        out
    }

    pub fn to_concrete(&self) -> Option<Observable<R>> {
        self.is_concrete().then(|| self.base())
    }

    pub fn unknowns(&self) -> impl Iterator<Item = UnknownId> + '_ {
        self.terms.values().flat_map(|c| c.linear.keys().copied())
    }
}

impl<R: Coeff> fmt::Debug for AffineObservable<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{:?}]{:?}", c, m.exponents())?;
        }
        Ok(())
    }
}
