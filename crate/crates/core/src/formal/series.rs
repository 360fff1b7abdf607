use std::collections::BTreeMap;
use std::fmt;

use crate::scalars::Scalar;

use super::laurent::write_term;
use super::{FormalError, LaurentPoly, Var};

/// A window onto a possibly infinite Laurent series.
///
/// Coefficients are known for exponents in `[lo, hi]`. Outside the window
/// they are unknown unless `zero_below` / `zero_above` records that the
/// series vanishes there.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    var: Var,
    lo: i64,
    hi: i64,
    zero_below: bool,
    zero_above: bool,
    coeffs: BTreeMap<i64, Scalar>,
}

impl TruncatedSeries {
    /// Terms outside `[lo, hi]` are dropped.
    pub fn new(
        var: Var,
        lo: i64,
        hi: i64,
        zero_below: bool,
        zero_above: bool,
        terms: impl IntoIterator<Item = (i64, Scalar)>,
    ) -> Result<Self, FormalError> {
        if lo > hi {
            return Err(FormalError::EmptyRange { lo, hi });
        }
        let mut coeffs = BTreeMap::new();
        for (e, c) in terms {
            if (lo..=hi).contains(&e) && !c.is_zero() {
                let slot: &mut Scalar = coeffs.entry(e).or_default();
                *slot += &c;
                if slot.is_zero() {
                    coeffs.remove(&e);
                }
            }
        }
        Ok(TruncatedSeries { var, lo, hi, zero_below, zero_above, coeffs })
    }

    /// The exact polynomial viewed through the window `[lo, hi]`.
    pub fn from_laurent(p: &LaurentPoly, lo: i64, hi: i64) -> Result<Self, FormalError> {
        let zero_below = p.min_exp().is_none_or(|m| m >= lo);
        let zero_above = p.max_exp().is_none_or(|m| m <= hi);
        TruncatedSeries::new(p.var(), lo, hi, zero_below, zero_above, p.terms().map(|(e, c)| (e, c.clone())))
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn floor(&self) -> i64 {
        self.lo
    }

    pub fn ceiling(&self) -> i64 {
        self.hi
    }

    pub fn zero_below(&self) -> bool {
        self.zero_below
    }

    pub fn zero_above(&self) -> bool {
        self.zero_above
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// The coefficient if it is determined by the window.
    pub fn known(&self, exp: i64) -> Option<Scalar> {
        if (self.lo..=self.hi).contains(&exp) {
            return Some(self.coeffs.get(&exp).cloned().unwrap_or_default());
        }
        if (exp < self.lo && self.zero_below) || (exp > self.hi && self.zero_above) {
            return Some(Scalar::zero());
        }
        None
    }

    pub fn coeff(&self, exp: i64) -> Result<Scalar, FormalError> {
        self.known(exp).ok_or(FormalError::Truncation { exp, lo: self.lo, hi: self.hi })
    }

    pub fn residue(&self) -> Result<Scalar, FormalError> {
        self.coeff(-1)
    }

    /// Known everywhere: the series is a Laurent polynomial.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        (self.zero_below && self.zero_above)
            .then(|| LaurentPoly::from_terms(self.var, self.terms().map(|(e, c)| (e, c.clone()))))
    }

    /// Product with a Laurent polynomial; the window shrinks to what the
    /// input window determines.
    pub fn mul_laurent(&self, p: &LaurentPoly) -> Result<TruncatedSeries, FormalError> {
        if p.var() != self.var {
            return Err(FormalError::VariableMismatch);
        }
        let (Some(pmin), Some(pmax)) = (p.min_exp(), p.max_exp()) else {
            return TruncatedSeries::new(self.var, self.lo, self.hi, true, true, []);
        };
        // coefficient at e uses self at e - q for q in [pmin, pmax]
        let lo = if self.zero_below { self.lo + pmin } else { self.lo + pmax };
        let hi = if self.zero_above { self.hi + pmax } else { self.hi + pmin };
        let mut terms = BTreeMap::<i64, Scalar>::new();
        for (e, a) in self.terms() {
            for (q, b) in p.terms() {
                *terms.entry(e + q).or_default() += &(a * b);
            }
        }
        TruncatedSeries::new(self.var, lo, hi, self.zero_below, self.zero_above, terms)
    }

    /// Product of two series that both vanish below their windows.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, FormalError> {
        if other.var != self.var {
            return Err(FormalError::VariableMismatch);
        }
        if let Some(p) = other.to_laurent() {
            return self.mul_laurent(&p);
        }
        if let Some(p) = self.to_laurent() {
            return other.mul_laurent(&p);
        }
        if !(self.zero_below && other.zero_below) {
            return Err(FormalError::Unsupported("product of two series unbounded below"));
        }
        let lo = self.lo + other.lo;
        let hi = (self.hi + other.lo).min(other.hi + self.lo);
        let mut terms = BTreeMap::<i64, Scalar>::new();
        for (e, a) in self.terms() {
            for (f, b) in other.terms() {
                if e + f <= hi {
                    *terms.entry(e + f).or_default() += &(a * b);
                }
            }
        }
        TruncatedSeries::new(self.var, lo, hi, true, false, terms)
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, FormalError> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, FormalError> {
        self.combine(other, true)
    }

    fn combine(&self, other: &TruncatedSeries, negate: bool) -> Result<TruncatedSeries, FormalError> {
        if other.var != self.var {
            return Err(FormalError::VariableMismatch);
        }
        // a side that is zero beyond its window does not restrict the sum
        let lo = match (self.zero_below, other.zero_below) {
            (true, true) => self.lo.min(other.lo),
            (true, false) => other.lo,
            (false, true) => self.lo,
            (false, false) => self.lo.max(other.lo),
        };
        let hi = match (self.zero_above, other.zero_above) {
            (true, true) => self.hi.max(other.hi),
            (true, false) => other.hi,
            (false, true) => self.hi,
            (false, false) => self.hi.min(other.hi),
        };
        let rhs = other.terms().map(|(e, c)| (e, if negate { -c } else { c.clone() }));
        let terms: Vec<_> = self.terms().map(|(e, c)| (e, c.clone())).chain(rhs).collect();
        TruncatedSeries::new(
            self.var,
            lo,
            hi,
            self.zero_below && other.zero_below,
            self.zero_above && other.zero_above,
            terms,
        )
    }

    pub fn derivative(&self) -> TruncatedSeries {
        let terms = self.terms().map(|(e, c)| (e - 1, c.scale(&e.into())));
        TruncatedSeries::new(self.var, self.lo - 1, self.hi - 1, self.zero_below, self.zero_above, terms)
            .expect("window is nonempty")
    }

    /// Exponent range where both series are determined (implied zeros count).
    fn comparison_range(&self, other: &TruncatedSeries) -> (i64, i64) {
        (self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Equality on every exponent where both coefficients are determined.
    pub fn agrees_with(&self, other: &TruncatedSeries) -> bool {
        self.first_disagreement(other).is_none()
    }

    pub fn first_disagreement(&self, other: &TruncatedSeries) -> Option<i64> {
        let (lo, hi) = self.comparison_range(other);
        (lo..=hi).find(|&e| matches!((self.known(e), other.known(e)), (Some(a), Some(b)) if a != b))
    }

    /// Equality with an exact polynomial wherever this series is determined.
    pub fn agrees_with_laurent(&self, p: &LaurentPoly) -> bool {
        if p.var() != self.var {
            return false;
        }
        let window_ok = (self.lo..=self.hi).all(|e| self.known(e).unwrap() == p.coeff(e));
        let outside_ok = p
            .terms()
            .filter(|(e, _)| !(self.lo..=self.hi).contains(e))
            .all(|(e, c)| self.known(e).is_none_or(|k| k == *c));
        window_ok && outside_ok
    }

    /// Restrict to a narrower window.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<TruncatedSeries, FormalError> {
        let lo2 = lo.max(self.lo);
        let hi2 = hi.min(self.hi);
        TruncatedSeries::new(
            self.var,
            lo2,
            hi2,
            self.zero_below && lo2 == self.lo,
            self.zero_above && hi2 == self.hi,
            self.terms().map(|(e, c)| (e, c.clone())),
        )
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.zero_below {
            write!(f, "{{valid from {}^{}}}... + ", self.var, self.lo)?;
        }
        for (e, c) in self.terms() {
            write_term(f, first, self.var, e, c)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        if !self.zero_above {
            write!(f, " + ...{{valid to {}^{}}}", self.var, self.hi)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
