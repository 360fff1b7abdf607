//! Coefficient arithmetic: exact rationals extended by the commuting
//! central symbols `K` (level) and `C` (central charge).

mod parse;
mod rational;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

pub use rational::Rational;

/// Error from parsing a rational, scalar or other small expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseScalarError {
    pub position: usize,
    pub message: String,
}

impl ParseScalarError {
    pub fn new(position: usize, message: String) -> Self {
        ParseScalarError { position, message }
    }
}

/// Degrees of a monomial `K^k C^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Degree {
    pub k: u32,
    pub c: u32,
}

impl Degree {
    pub const ONE: Degree = Degree { k: 0, c: 0 };
    pub const K: Degree = Degree { k: 1, c: 0 };
    pub const C: Degree = Degree { k: 0, c: 1 };
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        Degree { k: self.k + rhs.k, c: self.c + rhs.c }
    }
}

/// A polynomial in `K` and `C` with rational coefficients.
///
/// Terms are kept sorted by degree with no zero coefficients, so derived
/// equality is equality of polynomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: SmallVec<[(Degree, Rational); 1]>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: SmallVec::new() }
    }

    pub fn one() -> Self {
        Scalar::from(Rational::one())
    }

    /// The level symbol `K`.
    pub fn k() -> Self {
        Scalar::monomial(Degree::K, Rational::one())
    }

    /// The central charge symbol `C`.
    pub fn c() -> Self {
        Scalar::monomial(Degree::C, Rational::one())
    }

    pub fn monomial(degree: Degree, coeff: Rational) -> Self {
        let mut terms = SmallVec::new();
        if !coeff.is_zero() {
            terms.push((degree, coeff));
        }
        Scalar { terms }
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar::from(Rational::from_integer(n))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Scalar::from(Rational::new(numer, denom))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == Degree::ONE && self.terms[0].1.is_one()
    }

    /// The value as a plain rational if no central symbol occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(d, r)] if *d == Degree::ONE => Some(r.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Degree, &Rational)> {
        self.terms.iter().map(|(d, r)| (*d, r))
    }

    pub fn coeff(&self, degree: Degree) -> Rational {
        self.terms
            .iter()
            .find(|(d, _)| *d == degree)
            .map(|(_, r)| r.clone())
            .unwrap_or_default()
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        if r.is_one() {
            return self.clone();
        }
        Scalar { terms: self.terms.iter().map(|(d, c)| (*d, c * r)).collect() }
    }

    /// Substitute numeric values for `K` and `C`.
    pub fn eval(&self, k_val: &Rational, c_val: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (d, coeff) in &self.terms {
            acc += &(&(coeff * &k_val.pow(d.k)) * &c_val.pow(d.c));
        }
        acc
    }

    fn add_term(&mut self, degree: Degree, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.binary_search_by(|(d, _)| d.cmp(&degree)) {
            Ok(i) => {
                let sum = &self.terms[i].1 + coeff;
                if sum.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = sum;
                }
            }
            Err(i) => self.terms.insert(i, (degree, coeff.clone())),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::monomial(Degree::ONE, r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (d, c) in &rhs.terms {
            self.add_term(*d, c);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (d, c) in &rhs.terms {
            self.add_term(*d, &-c);
        }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        // rational fast path covers nearly every product in the rewrite engine
        match (self.terms.as_slice(), rhs.terms.as_slice()) {
            ([], _) | (_, []) => return Scalar::zero(),
            ([(d, a)], [(e, b)]) => return Scalar::monomial(*d + *e, a * b),
            _ => {}
        }
        let mut out = Scalar::zero();
        for (d, a) in &self.terms {
            for (e, b) in &rhs.terms {
                out.add_term(*d + *e, &(a * b));
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.into_iter().map(|(d, c)| (d, -c)).collect() }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

fn write_symbols(f: &mut fmt::Formatter<'_>, d: Degree) -> fmt::Result {
    let mut first = true;
    for (sym, pow) in [("K", d.k), ("C", d.c)] {
        if pow == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if pow == 1 {
            write!(f, "{sym}")?;
        } else {
            write!(f, "{sym}^{pow}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            let mag = if i > 0 {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
                c.abs()
            } else if c.is_negative() && *d != Degree::ONE {
                write!(f, "-")?;
                c.abs()
            } else {
                c.clone()
            };
            if *d == Degree::ONE {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write_symbols(f, *d)?;
            } else if mag.is_integer() {
                write!(f, "{mag}*")?;
                write_symbols(f, *d)?;
            } else {
                write!(f, "({mag})*")?;
                write_symbols(f, *d)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_scalar(s)
    }
}
