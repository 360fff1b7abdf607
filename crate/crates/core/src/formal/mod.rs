//! Formal Laurent and delta-series calculus at finite truncation.
//!
//! Every infinite object carries the window on which its coefficients are
//! known, and every comparison is made on the intersection of windows.

mod bivariate;
mod laurent;
mod series;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::newton::{binomial, PolySequence};
use crate::scalars::{Rational, Scalar};

pub use bivariate::BivariateTrunc;
pub use laurent::LaurentPoly;
pub use series::TruncatedSeries;

/// Formal variable tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Var {
    X,
    Y,
    Z,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormalError {
    #[error("exponent {exp} lies outside the valid window [{lo}, {hi}]")]
    Truncation { exp: i64, lo: i64, hi: i64 },
    #[error("empty window [{lo}, {hi}]")]
    EmptyRange { lo: i64, hi: i64 },
    #[error("operands use different variables")]
    VariableMismatch,
    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
}

/// `δ^(i)(z) = Σ_n C(n, i) z^(-n-1)` on the exponent window `[floor, ceiling]`.
pub fn delta_series(i: u32, floor: i64, ceiling: i64) -> Result<TruncatedSeries, FormalError> {
    TruncatedSeries::new(Var::Z, floor, ceiling, false, false, (floor..=ceiling).map(|e| (e, Scalar::from(binomial(-e - 1, i)))))
}

/// A finite combination `Σ_i R_i δ^(i)(z)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DeltaCombination {
    terms: BTreeMap<u32, Scalar>,
}

impl DeltaCombination {
    pub fn new(terms: impl IntoIterator<Item = (u32, Scalar)>) -> Self {
        let mut d = DeltaCombination::default();
        for (i, r) in terms {
            d.add_term(i, &r);
        }
        d
    }

    pub fn delta(i: u32) -> Self {
        DeltaCombination::new([(i, Scalar::one())])
    }

    /// The formal series of a polynomial sequence is `Σ_i R_i δ^(i)(z)`
    /// with `R_i` its Newton coefficients.
    pub fn from_poly_sequence(p: &PolySequence) -> Self {
        DeltaCombination::new(p.coeffs().iter().enumerate().map(|(i, r)| (i as u32, r.clone())))
    }

    pub fn to_poly_sequence(&self) -> PolySequence {
        let len = self.terms.keys().next_back().map_or(0, |&i| i as usize + 1);
        PolySequence::new((0..len).map(|i| self.coeff(i as u32)).collect())
    }

    fn add_term(&mut self, i: u32, r: &Scalar) {
        if r.is_zero() {
            return;
        }
        let slot = self.terms.entry(i).or_default();
        *slot += r;
        if slot.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.terms.iter().map(|(i, r)| (*i, r))
    }

    pub fn coeff(&self, i: u32) -> Scalar {
        self.terms.get(&i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Explicit coefficients on `[floor, ceiling]`.
    pub fn to_series(&self, floor: i64, ceiling: i64) -> Result<TruncatedSeries, FormalError> {
        let mut acc = TruncatedSeries::new(Var::Z, floor, ceiling, false, false, [])?;
        for (i, r) in self.terms() {
            let d = delta_series(i, floor, ceiling)?;
            let scaled = TruncatedSeries::new(Var::Z, floor, ceiling, false, false, d.terms().map(|(e, c)| (e, c * r)))?;
            acc = acc.add(&scaled)?;
        }
        Ok(acc)
    }

    /// `Σ R_i / (z-1)^(i+1)`, expanded in nonnegative powers of `-1`
    /// i.e. in `z^-1`, to `terms` terms per kernel.
    pub fn plus_kernel(&self, terms: u32) -> TruncatedSeries {
        // (z + (-1))^m = Σ_k C(m,k) z^(m-k) (-1)^k
        let mut out = BTreeMap::<i64, Scalar>::new();
        for (i, r) in self.terms() {
            let m = -(i as i64) - 1;
            for k in 0..terms as i64 {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let c = &binomial(m, k as u32) * &Rational::from_integer(sign);
                *out.entry(m - k).or_default() += &r.scale(&c);
            }
        }
        if self.is_zero() {
            return TruncatedSeries::new(Var::Z, -1, -1, true, true, []).unwrap();
        }
        // kernel i is known down to exponent -i - terms
        let lo_valid = self.terms().map(|(i, _)| -(i as i64) - terms as i64).max().unwrap();
        TruncatedSeries::new(Var::Z, lo_valid, -1, false, true, out).unwrap()
    }

    /// `-Σ R_i / (-1+z)^(i+1)`, expanded in nonnegative powers of `z`.
    pub fn minus_kernel(&self, terms: u32) -> TruncatedSeries {
        // (-1 + z)^m = Σ_k C(m,k) (-1)^(m-k) z^k
        let mut out = BTreeMap::<i64, Scalar>::new();
        for (i, r) in self.terms() {
            let m = -(i as i64) - 1;
            for k in 0..terms as i64 {
                let sign = if (m - k).rem_euclid(2) == 0 { -1 } else { 1 };
                let c = &binomial(m, k as u32) * &Rational::from_integer(sign);
                *out.entry(k).or_default() += &r.scale(&c);
            }
        }
        TruncatedSeries::new(Var::Z, 0, terms as i64 - 1, true, false, out).unwrap()
    }
}

impl fmt::Display for DeltaCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (i, r)) in self.terms().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if r.is_one() {
                write!(f, "δ^({i})")?;
            } else {
                write!(f, "({r})*δ^({i})")?;
            }
        }
        Ok(())
    }
}

/// Multiply a delta combination by a Laurent polynomial. Each `z^e` is
/// rewritten as `((z-1) + 1)^e = Σ_j C(e, j) (z-1)^j`, and
/// `(z-1)^j δ^(i) = δ^(i-j)` (zero for `j > i`), so only `j <= i` matter.
pub fn delta_multiply(p: &LaurentPoly, d: &DeltaCombination) -> DeltaCombination {
    let mut out = DeltaCombination::default();
    for (e, pc) in p.terms() {
        for (i, r) in d.terms() {
            for j in 0..=i {
                let c = binomial(e, j);
                if !c.is_zero() {
                    out.add_term(i - j, &(pc * r).scale(&c));
                }
            }
        }
    }
    out
}

/// `(x + y)^m = Σ_k C(m, k) x^(m-k) y^k`, expanded in the second variable.
/// Exact for `m >= 0`; for `m < 0` truncated at `y^ceiling`.
pub fn expand_binomial(m: i64, ceiling: u32) -> BivariateTrunc {
    expand_binomial_in(Var::X, Var::Y, m, ceiling)
}

pub fn expand_binomial_in(first: Var, second: Var, m: i64, ceiling: u32) -> BivariateTrunc {
    let top = if m >= 0 { m } else { ceiling as i64 };
    let slices = (0..=top)
        .map(|k| LaurentPoly::monomial(first, m - k, Scalar::from(binomial(m, k as u32))))
        .collect();
    BivariateTrunc::new(first, second, slices, m >= 0)
}

/// `Σ_{i <= order} y^i ∂^(i) f(x)`, cross-checked against substituting
/// `x + y` into every monomial of `f` through [`expand_binomial`].
pub fn taylor_expand(f: &LaurentPoly, order: u32) -> Result<BivariateTrunc, FormalError> {
    let fx = f.with_var(Var::X);
    let slices = (0..=order).map(|i| fx.divided_derivative(i)).collect();
    let taylor = BivariateTrunc::new(Var::X, Var::Y, slices, false);
    let mut substituted = BivariateTrunc::zero(Var::X, Var::Y);
    for (e, c) in fx.terms() {
        substituted = substituted.add(&expand_binomial(e, order).scale(c));
    }
    let substituted = substituted.truncate(order);
    if let Some((i, j)) = taylor.first_disagreement(&substituted) {
        return Err(FormalError::IdentityViolation(format!(
            "Taylor expansion of {f} disagrees with substitution at x^{i} y^{j}"
        )));
    }
    Ok(taylor)
}

/// Both sides of the two residue identities
/// `Res_x f(x)/(x-z)^(k+1) = ∂^(k) f(z)_-` and
/// `Res_x f(x)/(-z+x)^(k+1) = -∂^(k) f(z)_+`.
#[derive(Debug, Clone)]
pub struct ResidueKernelReport {
    pub k: u32,
    pub minus_lhs: TruncatedSeries,
    pub minus_rhs: LaurentPoly,
    pub plus_lhs: TruncatedSeries,
    pub plus_rhs: LaurentPoly,
}

impl ResidueKernelReport {
    pub fn holds(&self) -> bool {
        self.minus_lhs.agrees_with_laurent(&self.minus_rhs) && self.plus_lhs.agrees_with_laurent(&self.plus_rhs)
    }
}

/// Build the kernels with [`expand_binomial_in`] to order `ceiling`, take
/// residues in `x`, and compare with the split derivative.
pub fn residue_kernel_check(f: &LaurentPoly, k: u32, ceiling: u32) -> Result<ResidueKernelReport, FormalError> {
    let m = -(k as i64) - 1;
    let fx = f.with_var(Var::X);

    // (x + (-z))^m: power series in z with Laurent coefficients in x
    let minus_kernel = expand_binomial_in(Var::X, Var::Z, m, ceiling).scale_second(&Rational::from_integer(-1));
    let minus_terms = (0..=ceiling as i64).map(|j| (j, (&minus_kernel.slice(j as usize) * &fx).residue()));
    let minus_complete = fx.max_exp().is_none_or(|e| e <= k as i64 + ceiling as i64);
    let minus_lhs = TruncatedSeries::new(Var::Z, 0, ceiling as i64, true, minus_complete, minus_terms)?;

    // ((-z) + x)^m: power series in x with Laurent coefficients in z
    let plus_kernel = expand_binomial_in(Var::Z, Var::X, m, ceiling).scale_first(&Rational::from_integer(-1));
    let mut plus_terms = BTreeMap::<i64, Scalar>::new();
    for j in 0..=ceiling as i64 {
        // Res_x x^j f(x) picks the coefficient of x^(-1-j)
        let fc = fx.coeff(-1 - j);
        if fc.is_zero() {
            continue;
        }
        for (e, c) in plus_kernel.slice(j as usize).terms() {
            *plus_terms.entry(e).or_default() += &(c * &fc);
        }
    }
    // every term of f below x^(-1-ceiling) would be missed
    let plus_complete = fx.min_exp().is_none_or(|e| e >= -1 - ceiling as i64);
    let plus_lhs = TruncatedSeries::new(Var::Z, m - ceiling as i64, m, plus_complete, true, plus_terms)?;

    let fz = f.with_var(Var::Z);
    let (plus, minus) = fz.plus_minus_split();
    let report = ResidueKernelReport {
        k,
        minus_lhs,
        minus_rhs: minus.divided_derivative(k),
        plus_lhs,
        plus_rhs: -&plus.divided_derivative(k),
    };
    if !report.holds() {
        return Err(FormalError::IdentityViolation(format!("residue theorem fails for {f} at k = {k}")));
    }
    Ok(report)
}

/// Check `∂(z^k f) = k z^(k-1) f + z^k ∂f`.
pub fn leibniz_holds(f: &LaurentPoly, k: i64) -> bool {
    let lhs = f.shift(k).derivative();
    let rhs = &f.shift(k - 1).scale(&Scalar::from(k)) + &f.derivative().shift(k);
    lhs == rhs
}

/// Check `Res z^k ∂f = -k Res z^(k-1) f`.
pub fn integration_by_parts_holds(f: &LaurentPoly, k: i64) -> bool {
    f.derivative().shift(k).residue() == -f.shift(k - 1).residue().scale(&Rational::from_integer(k))
}
