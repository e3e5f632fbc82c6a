use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

/// Number of quantum and classical degrees of freedom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dims {
    pub quantum: usize,
    pub classical: usize,
}

impl Dims {
    pub const fn new(quantum: usize, classical: usize) -> Self {
        Self { quantum, classical }
    }

    /// One quantum and one classical degree of freedom.
    pub const ONE_ONE: Dims = Dims::new(1, 1);

    pub fn width(&self) -> usize {
        2 * (self.quantum + self.classical)
    }

    pub fn index(&self, var: Var) -> usize {
        let (nq, nc) = (self.quantum, self.classical);
        match var {
            Var::Q(i) => i,
            Var::P(i) => nq + i,
            Var::X(j) => 2 * nq + j,
            Var::K(j) => 2 * nq + nc + j,
        }
    }

    pub fn contains(&self, var: Var) -> bool {
        match var {
            Var::Q(i) | Var::P(i) => i < self.quantum,
            Var::X(j) | Var::K(j) => j < self.classical,
        }
    }

    /// All canonical variables in canonical order.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::with_capacity(self.width());
        out.extend((0..self.quantum).map(Var::Q));
        out.extend((0..self.quantum).map(Var::P));
        out.extend((0..self.classical).map(Var::X));
        out.extend((0..self.classical).map(Var::K));
        out
    }
}

/// A canonical variable, zero-indexed by degree of freedom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Q(usize),
    P(usize),
    X(usize),
    K(usize),
}

impl Var {
    pub fn is_quantum(self) -> bool {
        matches!(self, Var::Q(_) | Var::P(_))
    }
}

/// Sector of a basis element or observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sector {
    CNumber,
    Classical,
    Quantum,
    Mixed,
}

impl Sector {
    /// Purely classical or purely quantum (c-numbers are both).
    pub fn is_pure(self) -> bool {
        !matches!(self, Sector::Mixed)
    }
}

/// Canonically ordered word `q^r p^s x^t k^l`.
///
/// Exponents are laid out as `[q_1..q_n, p_1..p_n, x_1..x_m, k_1..k_m]`.
/// Ordering is graded: lower total degree first, then lexicographically
/// larger exponent vectors first, so that in degree two `q x` precedes `p k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(dims: Dims) -> Self {
        Self {
            exps: vec![0; dims.width()],
        }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Self { exps }
    }

    pub fn var(dims: Dims, var: Var) -> Self {
        let mut m = Self::one(dims);
        m.exps[dims.index(var)] = 1;
        m
    }

    /// `q^r p^s x^t k^l` for a single quantum and classical degree of freedom.
    pub fn qpxk(r: u32, s: u32, t: u32, l: u32) -> Self {
        Self { exps: vec![r, s, t, l] }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, dims: Dims, var: Var) -> u32 {
        self.exps[dims.index(var)]
    }

    pub fn with_exponent(&self, dims: Dims, var: Var, e: u32) -> Self {
        let mut m = self.clone();
        m.exps[dims.index(var)] = e;
        m
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn quantum_degree(&self, dims: Dims) -> u32 {
        self.exps[..2 * dims.quantum].iter().sum()
    }

    pub fn classical_degree(&self, dims: Dims) -> u32 {
        self.exps[2 * dims.quantum..].iter().sum()
    }

    pub fn sector(&self, dims: Dims) -> Sector {
        match (self.quantum_degree(dims) > 0, self.classical_degree(dims) > 0) {
            (false, false) => Sector::CNumber,
            (false, true) => Sector::Classical,
            (true, false) => Sector::Quantum,
            (true, true) => Sector::Mixed,
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Ordinary partial derivative of the symbol: `(e, m / var)` or `None`.
    pub fn derivative(&self, dims: Dims, var: Var) -> Option<(u32, Monomial)> {
        let idx = dims.index(var);
        let e = self.exps[idx];
        if e == 0 {
            return None;
        }
        let mut m = self.clone();
        m.exps[idx] -= 1;
        Some((e, m))
    }

    pub fn times_var(&self, dims: Dims, var: Var) -> Monomial {
        let mut m = self.clone();
        m.exps[dims.index(var)] += 1;
        m
    }

    /// All monomials of total degree `n` in canonical order.
    pub fn all_of_degree(dims: Dims, n: u32) -> Vec<Monomial> {
        let width = dims.width();
        let mut out = Vec::new();
        let mut cur = vec![0u32; width];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(Monomial { exps: cur.clone() });
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e;
                rec(pos + 1, left - e, cur, out);
            }
            cur[pos] = 0;
        }
        if width == 0 {
            if n == 0 {
                out.push(Monomial { exps: Vec::new() });
            }
            return out;
        }
        rec(0, n, &mut cur, &mut out);
        out
    }

    /// Normal-ordered product `self · rhs`.
    ///
    /// Returns terms `(c, j, m)` meaning `c · (-iℏ)^j · m`, from moving every
    /// `p_i` of `self` past every `q_i` of `rhs` with `p^b q^c =
    /// Σ_j C(b,j) C(c,j) j! (-iℏ)^j q^(c-j) p^(b-j)`.
    pub fn normal_product(&self, rhs: &Monomial, dims: Dims) -> Vec<(BigInt, u32, Monomial)> {
        let nq = dims.quantum;
        let mut base = self.exps.clone();
        for (b, r) in base.iter_mut().zip(&rhs.exps) {
            *b += *r;
        }
        let mut terms: Vec<(BigInt, u32, Monomial)> = vec![(BigInt::one(), 0, Monomial { exps: base })];
        for i in 0..nq {
            let b = self.exps[nq + i];
            let c = rhs.exps[i];
            let jmax = b.min(c);
            if jmax == 0 {
                continue;
            }
            let mut next = Vec::with_capacity(terms.len() * (jmax as usize + 1));
            for (coef, jacc, m) in &terms {
                for j in 0..=jmax {
                    let w = contraction_weight(b, c, j);
                    let mut mm = m.clone();
                    mm.exps[i] -= j;
                    mm.exps[nq + i] -= j;
                    next.push((coef * &w, jacc + j, mm));
                }
            }
            terms = next;
        }
        terms
    }
}

/// C(b,j) C(c,j) j!
fn contraction_weight(b: u32, c: u32, j: u32) -> BigInt {
    let mut w = BigInt::one();
    for t in 0..j {
        w *= BigInt::from(b - t) * BigInt::from(c - t);
    }
    for t in 1..=j {
        w /= BigInt::from(t);
    }
    w
}

/// Falling factorial e (e-1) ... (e-n+1).
pub(crate) fn falling(e: u32, n: u32) -> BigInt {
    let mut w = BigInt::one();
    for t in 0..n {
        w *= BigInt::from(e - t);
    }
    w
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial{:?}", self.exps)
    }
}
