use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::newton::binomial;
use crate::scalars::{Rational, Scalar};

use super::Var;

/// A finitely supported Laurent polynomial in one variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    var: Var,
    coeffs: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn zero(var: Var) -> Self {
        LaurentPoly { var, coeffs: BTreeMap::new() }
    }

    pub fn one(var: Var) -> Self {
        LaurentPoly::monomial(var, 0, Scalar::one())
    }

    pub fn monomial(var: Var, exp: i64, coeff: Scalar) -> Self {
        let mut p = LaurentPoly::zero(var);
        p.add_term(exp, &coeff);
        p
    }

    pub fn from_terms(var: Var, terms: impl IntoIterator<Item = (i64, Scalar)>) -> Self {
        let mut p = LaurentPoly::zero(var);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    /// `(z - 1)^j`.
    pub fn z_minus_one_pow(var: Var, j: u32) -> Self {
        LaurentPoly::from_terms(
            var,
            (0..=j).map(|k| {
                let sign = if (j - k).is_multiple_of(2) { 1 } else { -1 };
                (k as i64, Scalar::from(&binomial(j as i64, k) * &Rational::from_integer(sign)))
            }),
        )
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(&self, var: Var) -> Self {
        LaurentPoly { var, coeffs: self.coeffs.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Scalar {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Scalar)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i64, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        LaurentPoly::from_terms(self.var, self.terms().map(|(e, c)| (e, c * s)))
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { var: self.var, coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Termwise power rule.
    pub fn derivative(&self) -> Self {
        LaurentPoly::from_terms(self.var, self.terms().map(|(e, c)| (e - 1, c.scale(&Rational::from_integer(e)))))
    }

    /// The divided derivative `∂^(k) = ∂^k / k!`, which sends `z^e` to
    /// `C(e, k) z^(e-k)`.
    pub fn divided_derivative(&self, k: u32) -> Self {
        LaurentPoly::from_terms(self.var, self.terms().map(|(e, c)| (e - k as i64, c.scale(&binomial(e, k)))))
    }

    /// Coefficient of `z^-1`.
    pub fn residue(&self) -> Scalar {
        self.coeff(-1)
    }

    /// Split by the sign of the sequence index `n` of `z^(-n-1)`: the plus part
    /// holds exponents `<= -1` (n >= 0), the minus part exponents `>= 0`.
    pub fn plus_minus_split(&self) -> (LaurentPoly, LaurentPoly) {
        let mut plus = LaurentPoly::zero(self.var);
        let mut minus = LaurentPoly::zero(self.var);
        for (e, c) in self.terms() {
            if e <= -1 {
                plus.coeffs.insert(e, c.clone());
            } else {
                minus.coeffs.insert(e, c.clone());
            }
        }
        (plus, minus)
    }

    pub fn plus_part(&self) -> LaurentPoly {
        self.plus_minus_split().0
    }

    pub fn minus_part(&self) -> LaurentPoly {
        self.plus_minus_split().1
    }

    /// Substitute `z -> c z`.
    pub fn rescale_var(&self, c: &Rational) -> Self {
        LaurentPoly::from_terms(
            self.var,
            self.terms().map(|(e, coeff)| {
                let factor = if e >= 0 { c.pow(e as u32) } else { c.recip().pow((-e) as u32) };
                (e, coeff.scale(&factor))
            }),
        )
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.var, rhs.var, "variable mismatch");
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_terms(self.var, self.terms().map(|(e, c)| (e, -c)))
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.var, rhs.var, "variable mismatch");
        let mut out = LaurentPoly::zero(self.var);
        for (e, a) in self.terms() {
            for (f, b) in rhs.terms() {
                out.add_term(e + f, &(a * b));
            }
        }
        out
    }
}

pub(super) fn write_term(f: &mut fmt::Formatter<'_>, first: bool, var: Var, exp: i64, c: &Scalar) -> fmt::Result {
    let text = c.to_string();
    let single = c.terms().count() == 1;
    let (neg, mag) = match text.strip_prefix('-') {
        Some(rest) if single => (true, rest.to_string()),
        _ => (false, text),
    };
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if neg { '-' } else { '+' })?;
    }
    if exp == 0 {
        return if single { write!(f, "{mag}") } else { write!(f, "({mag})") };
    }
    match mag.as_str() {
        "1" => {}
        m if single && !m.contains(' ') && !m.contains('/') => write!(f, "{m}*")?,
        m if m.starts_with('(') && single => write!(f, "{m}*")?,
        m => write!(f, "({m})*")?,
    }
    if exp == 1 {
        write!(f, "{var}")
    } else {
        write!(f, "{var}^{exp}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            write_term(f, i == 0, self.var, e, c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
