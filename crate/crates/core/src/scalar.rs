//! Exact coefficient rings.
//!
//! [`GaussianRational`] is the field `Q(i)`. [`Scalar`] is a polynomial in the
//! formal symbols ℏ and ℏ_c with Gaussian-rational coefficients; it is the
//! coefficient ring of the full observable algebra. The [`Coeff`] trait lets
//! the algebra run either over [`Scalar`] (symbolic ℏ) or directly over
//! [`GaussianRational`] with ℏ specialised to 1.

use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rational number re + i·im.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Self::new(&self.re / &norm, -(&self.im / &norm)))
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Self {
        Self::new(-self.im.clone(), self.re.clone())
    }

    /// Multiplication by -i.
    pub fn mul_neg_i(&self) -> Self {
        Self::new(self.im.clone(), -self.re.clone())
    }

    /// Lossy conversion used only for diagnostics and floating-point cross-checks.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", self.re, -self.im.clone())
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

macro_rules! forward_owned_binop {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
    };
}

forward_owned_binop!(GaussianRational, Add, add);
forward_owned_binop!(GaussianRational, Sub, sub);
forward_owned_binop!(GaussianRational, Mul, mul);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

/// Polynomial in ℏ and ℏ_c with Gaussian-rational coefficients.
///
/// Keys are `(power of ℏ, power of ℏ_c)`. Zero coefficients are never stored,
/// so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar {
    terms: BTreeMap<(u32, u32), GaussianRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(GaussianRational::from_ratio(num, den))
    }

    /// `c · ℏ^a · ℏ_c^b`.
    pub fn term(c: GaussianRational, hbar_pow: u32, hbarc_pow: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((hbar_pow, hbarc_pow), c);
        }
        Self { terms }
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn hbar() -> Self {
        Self::term(GaussianRational::one(), 1, 0)
    }

    pub fn hbarc() -> Self {
        Self::term(GaussianRational::one(), 0, 1)
    }

    /// iℏ
    pub fn i_hbar() -> Self {
        Self::term(GaussianRational::i(), 1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The pure Gaussian-rational value if this scalar has no ℏ or ℏ_c dependence.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, key: (u32, u32), c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(GaussianRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v.conj())).collect(),
        }
    }

    /// Exact division by iℏ; `None` when some term carries no factor of ℏ.
    pub fn div_i_hbar(&self) -> Option<Self> {
        let mut out = BTreeMap::new();
        for (&(a, b), v) in &self.terms {
            if a == 0 {
                return None;
            }
            out.insert((a - 1, b), v.mul_neg_i());
        }
        Some(Self { terms: out })
    }

    /// Coefficient of ℏ_c^n, with ℏ_c removed.
    pub fn hbarc_coefficient(&self, n: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|((_, b), _)| *b == n)
                .map(|(&(a, _), v)| ((a, 0), v.clone()))
                .collect(),
        }
    }

    /// Substitute ℏ_c → ℏ.
    pub fn substitute_hbarc_with_hbar(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), v) in &self.terms {
            out.add_term((a + b, 0), v);
        }
        out
    }

    /// Evaluate at ℏ = 1, keeping ℏ_c symbolic.
    pub fn at_unit_hbar(&self) -> Self {
        let mut out = Self::zero();
        for (&(_, b), v) in &self.terms {
            out.add_term((0, b), v);
        }
        out
    }

    /// Evaluate at ℏ = ℏ_c = 1.
    pub fn at_unit(&self) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for v in self.terms.values() {
            acc += v;
        }
        acc
    }

    pub fn max_hbarc_power(&self) -> u32 {
        self.terms.keys().map(|&(_, b)| b).max().unwrap_or(0)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})", v)?;
            if a > 0 {
                write!(f, "·ℏ^{}", a)?;
            }
            if b > 0 {
                write!(f, "·ℏc^{}", b)?;
            }
        }
        Ok(())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_term(*k, v);
        }
        out
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_term(*k, &-v);
        }
        out
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (&(a1, b1), v1) in &self.terms {
            for (&(a2, b2), v2) in &o.terms {
                out.add_term((a1 + a2, b1 + b2), &(v1 * v2));
            }
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

forward_owned_binop!(Scalar, Add, add);
forward_owned_binop!(Scalar, Sub, sub);
forward_owned_binop!(Scalar, Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<GaussianRational> for Scalar {
    fn from(c: GaussianRational) -> Self {
        Scalar::constant(c)
    }
}

/// Coefficient ring of an observable algebra.
///
/// The ring must contain the Gaussian rationals and a distinguished real
/// element ℏ; `div_i_hbar` is the partial inverse of multiplication by iℏ.
pub trait Coeff: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn from_gaussian(c: GaussianRational) -> Self;
    fn hbar() -> Self;
    fn add_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, c: &GaussianRational) -> Self;
    fn conj(&self) -> Self;
    fn div_i_hbar(&self) -> Option<Self>;

    fn one() -> Self {
        Self::from_gaussian(GaussianRational::one())
    }

    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    /// (-iℏ)^n
    fn neg_i_hbar_pow(n: u32) -> Self {
        let mut acc = Self::one();
        let step = Self::hbar().scale(&-GaussianRational::i());
        for _ in 0..n {
            acc = acc.mul_ref(&step);
        }
        acc
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn from_gaussian(c: GaussianRational) -> Self {
        Scalar::constant(c)
    }
    fn hbar() -> Self {
        Scalar::hbar()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        Scalar::scale(self, c)
    }
    fn conj(&self) -> Self {
        Scalar::conj(self)
    }
    fn div_i_hbar(&self) -> Option<Self> {
        Scalar::div_i_hbar(self)
    }
    fn neg_i_hbar_pow(n: u32) -> Self {
        // (-i)^n ℏ^n
        let unit = match n % 4 {
            0 => GaussianRational::one(),
            1 => -GaussianRational::i(),
            2 => -GaussianRational::one(),
            _ => GaussianRational::i(),
        };
        Scalar::term(unit, n, 0)
    }
}

/// Gaussian rationals as a coefficient ring with ℏ = 1.
impl Coeff for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn from_gaussian(c: GaussianRational) -> Self {
        c
    }
    fn hbar() -> Self {
        GaussianRational::one()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        self * c
    }
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
    fn div_i_hbar(&self) -> Option<Self> {
        Some(self.mul_neg_i())
    }
    fn neg_i_hbar_pow(n: u32) -> Self {
        match n % 4 {
            0 => GaussianRational::one(),
            1 => -GaussianRational::i(),
            2 => -GaussianRational::one(),
            _ => GaussianRational::i(),
        }
    }
}
