//! Text form of observables.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)*
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers are `q p x k` with an optional 1-based index, `hbar`,
//! `hbarc` and `i`. `*` is the noncommutative algebra product.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use semiquant_core::{Dims, GaussianRational, Monomial, Observable, Scalar, Var};
use thiserror::Error;

/// Largest accepted exponent.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    UnknownSymbol(String),
    IndexOutOfRange { symbol: String, max: usize },
    NegativeExponent,
    ExponentTooLarge(String),
    ZeroDenominator,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken { found, expected } => write!(f, "expected {expected}, found {found:?}"),
            ParseErrorKind::UnexpectedEnd { expected } => write!(f, "expected {expected}, found end of input"),
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol {s:?}"),
            ParseErrorKind::IndexOutOfRange { symbol, max } => {
                write!(f, "index of {symbol:?} out of range (1..={max})")
            }
            ParseErrorKind::NegativeExponent => write!(f, "exponents must be nonnegative integers"),
            ParseErrorKind::ExponentTooLarge(e) => write!(f, "exponent {e} exceeds {MAX_EXPONENT}"),
            ParseErrorKind::ZeroDenominator => write!(f, "zero denominator"),
        }
    }
}

/// `position` is a byte offset into the source.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("at {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    /// The source line with a caret under the offending position.
    pub fn diagnostic(&self, src: &str) -> String {
        let col = src[..self.position.min(src.len())].chars().count();
        format!("{src}\n{}^\nerror: {}", " ".repeat(col), self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => n.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Sym(c) => c.to_string(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*^/()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            let ch = src[i..].chars().next().expect("char");
            return Err(ParseError {
                position: i,
                kind: ParseErrorKind::UnexpectedChar(ch),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    dims: Dims,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.offset(),
            kind,
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => self.err(ParseErrorKind::UnexpectedToken {
                found: t.describe(),
                expected,
            }),
            None => self.err(ParseErrorKind::UnexpectedEnd { expected }),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Observable, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Observable, ParseError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Observable, ParseError> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Observable, ParseError> {
        let mut base = self.atom()?;
        while self.eat('^') {
            let e = match self.peek() {
                Some(Tok::Int(n)) => n.clone(),
                Some(Tok::Sym('-')) => return Err(self.err(ParseErrorKind::NegativeExponent)),
                _ => return Err(self.unexpected("integer exponent")),
            };
            let e = match e.to_u32().filter(|e| *e <= MAX_EXPONENT) {
                Some(e) => e,
                None => return Err(self.err(ParseErrorKind::ExponentTooLarge(e.to_string()))),
            };
            self.pos += 1;
            let mut out = Observable::one(self.dims);
            for _ in 0..e {
                out = &out * &base;
            }
            base = out;
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Observable, ParseError> {
        let d = self.dims;
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut den = BigInt::one();
                if self.eat('/') {
                    match self.peek() {
                        Some(Tok::Int(m)) if m.is_zero() => return Err(self.err(ParseErrorKind::ZeroDenominator)),
                        Some(Tok::Int(m)) => den = m.clone(),
                        _ => return Err(self.unexpected("integer denominator")),
                    }
                    self.pos += 1;
                }
                let c = GaussianRational::real(BigRational::new(n, den));
                Ok(Observable::constant(d, Scalar::constant(c)))
            }
            Some(Tok::Ident(s)) => {
                let v = self.symbol(&s)?;
                self.pos += 1;
                Ok(v)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.unexpected("')'"));
                }
                Ok(v)
            }
            _ => Err(self.unexpected("operand")),
        }
    }

    fn symbol(&self, s: &str) -> Result<Observable, ParseError> {
        let d = self.dims;
        match s {
            "hbar" => return Ok(Observable::constant(d, Scalar::hbar())),
            "hbarc" => return Ok(Observable::constant(d, Scalar::hbarc())),
            "i" => return Ok(Observable::constant(d, Scalar::i())),
            _ => {}
        }
        let unknown = || self.err(ParseErrorKind::UnknownSymbol(s.to_string()));
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(unknown)?;
        let rest = chars.as_str();
        let index = if rest.is_empty() {
            1
        } else if rest.bytes().all(|b| b.is_ascii_digit()) && !rest.starts_with('0') {
            rest.parse::<usize>().map_err(|_| unknown())?
        } else if rest.bytes().all(|b| b.is_ascii_digit()) {
            0
        } else {
            return Err(unknown());
        };
        let (width, make): (usize, fn(usize) -> Var) = match head {
            'q' => (d.quantum, Var::Q),
            'p' => (d.quantum, Var::P),
            'x' => (d.classical, Var::X),
            'k' => (d.classical, Var::K),
            _ => return Err(unknown()),
        };
        if index == 0 || index > width {
            return Err(self.err(ParseErrorKind::IndexOutOfRange {
                symbol: s.to_string(),
                max: width,
            }));
        }
        Ok(Observable::var(d, make(index - 1)))
    }
}

/// Evaluate an expression in the algebra with the given dimensions.
pub fn parse(src: &str, dims: Dims) -> Result<Observable, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        dims,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected("operator or end of input"));
    }
    Ok(v)
}

fn var_name(dims: Dims, v: Var) -> String {
    let (c, i, width) = match v {
        Var::Q(i) => ('q', i, dims.quantum),
        Var::P(i) => ('p', i, dims.quantum),
        Var::X(i) => ('x', i, dims.classical),
        Var::K(i) => ('k', i, dims.classical),
    };
    if width > 1 {
        format!("{c}{}", i + 1)
    } else {
        c.to_string()
    }
}

fn rational_factor(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

fn power(name: &str, e: u32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        e => Some(format!("{name}^{e}")),
    }
}

/// Canonical text: one summand per (monomial, ℏ power, ℏ_c power, real or
/// imaginary part), monomials in ascending graded order.
pub fn format(a: &Observable) -> String {
    let dims = a.dims();
    let mut out = String::new();
    for (m, c) in a.terms() {
        let vars: Vec<String> = dims
            .vars()
            .into_iter()
            .filter_map(|v| power(&var_name(dims, v), m.exponent(dims, v)))
            .collect();
        for (&(hp, hcp), g) in c.terms() {
            for (part, imag) in [(&g.re, false), (&g.im, true)] {
                if part.is_zero() {
                    continue;
                }
                let mut factors = Vec::new();
                let mag = part.abs();
                let rest_empty = !imag && hp == 0 && hcp == 0 && vars.is_empty();
                if !mag.is_one() || rest_empty {
                    factors.push(rational_factor(&mag));
                }
                if imag {
                    factors.push("i".to_string());
                }
                factors.extend(power("hbar", hp));
                factors.extend(power("hbarc", hcp));
                factors.extend(vars.iter().cloned());
                let body = factors.join("*");
                match (out.is_empty(), part.is_negative()) {
                    (true, false) => out.push_str(&body),
                    (true, true) => write!(out, "-{body}").unwrap(),
                    (false, false) => write!(out, " + {body}").unwrap(),
                    (false, true) => write!(out, " - {body}").unwrap(),
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text of an ℏ = 1 observable.
pub fn format_unit(a: &Observable<GaussianRational>) -> String {
    format(&a.map_coeffs(|c| Scalar::constant(c.clone())))
}

/// Canonical text of a bare coefficient.
pub fn format_scalar(c: &Scalar) -> String {
    format(&Observable::constant(Dims::ONE_ONE, c.clone()))
}

pub fn format_gaussian(c: &GaussianRational) -> String {
    format_scalar(&Scalar::constant(c.clone()))
}

/// `q^r*p^s*x^t*k^l` style name of a basis monomial; `1` for the identity.
pub fn format_monomial(dims: Dims, m: &Monomial) -> String {
    format(&Observable::term(dims, m.clone(), Scalar::one()))
}
