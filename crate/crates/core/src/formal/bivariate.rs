use std::fmt;

use crate::scalars::{Rational, Scalar};

use super::laurent::write_term;
use super::{LaurentPoly, Var};

/// `Σ_{j >= 0} P_j(first) · second^j` with Laurent polynomial slices.
///
/// The first variable is exact. In the second variable, degrees
/// `0 ..= ceiling` are known; if `exact`, all higher slices vanish.
#[derive(Clone, PartialEq, Eq)]
pub struct BivariateTrunc {
    first: Var,
    second: Var,
    slices: Vec<LaurentPoly>,
    exact: bool,
}

impl BivariateTrunc {
    pub fn new(first: Var, second: Var, slices: Vec<LaurentPoly>, exact: bool) -> Self {
        assert!(slices.iter().all(|s| s.var() == first), "slice variable mismatch");
        let mut b = BivariateTrunc { first, second, slices, exact };
        if exact {
            while b.slices.last().is_some_and(LaurentPoly::is_zero) {
                b.slices.pop();
            }
        }
        b
    }

    pub fn zero(first: Var, second: Var) -> Self {
        BivariateTrunc::new(first, second, Vec::new(), true)
    }

    pub fn first_var(&self) -> Var {
        self.first
    }

    pub fn second_var(&self) -> Var {
        self.second
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Highest known degree in the second variable; `None` when exact.
    pub fn ceiling(&self) -> Option<usize> {
        (!self.exact).then(|| self.slices.len().saturating_sub(1))
    }

    pub fn slice(&self, j: usize) -> LaurentPoly {
        self.slices.get(j).cloned().unwrap_or_else(|| LaurentPoly::zero(self.first))
    }

    /// Coefficient of `first^i second^j`, if known.
    pub fn coeff(&self, i: i64, j: usize) -> Option<Scalar> {
        match self.slices.get(j) {
            Some(s) => Some(s.coeff(i)),
            None if self.exact => Some(Scalar::zero()),
            None => None,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        BivariateTrunc::new(self.first, self.second, self.slices.iter().map(|s| s.scale(c)).collect(), self.exact)
    }

    /// Substitute `second -> r · second`.
    pub fn scale_second(&self, r: &Rational) -> Self {
        let slices = self
            .slices
            .iter()
            .enumerate()
            .map(|(j, s)| s.scale(&Scalar::from(r.pow(j as u32))))
            .collect();
        BivariateTrunc::new(self.first, self.second, slices, self.exact)
    }

    /// Substitute `first -> r · first`.
    pub fn scale_first(&self, r: &Rational) -> Self {
        BivariateTrunc::new(self.first, self.second, self.slices.iter().map(|s| s.rescale_var(r)).collect(), self.exact)
    }

    /// Keep second-variable degrees `<= order`.
    pub fn truncate(&self, order: u32) -> Self {
        let keep = order as usize + 1;
        if self.exact && self.slices.len() <= keep {
            return self.clone();
        }
        let slices = (0..keep.min(self.slices.len())).map(|j| self.slice(j)).collect();
        BivariateTrunc::new(self.first, self.second, slices, false)
    }

    fn known_len(&self, other: &Self) -> Option<usize> {
        match (self.exact, other.exact) {
            (true, true) => None,
            (true, false) => Some(other.slices.len()),
            (false, true) => Some(self.slices.len()),
            (false, false) => Some(self.slices.len().min(other.slices.len())),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.first, self.second), (other.first, other.second), "variable mismatch");
        let len = self.known_len(other).unwrap_or(self.slices.len().max(other.slices.len()));
        let slices = (0..len).map(|j| &self.slice(j) + &other.slice(j)).collect();
        BivariateTrunc::new(self.first, self.second, slices, self.exact && other.exact)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.first, self.second), (other.first, other.second), "variable mismatch");
        let full = (self.slices.len() + other.slices.len()).saturating_sub(1);
        let len = self.known_len(other).unwrap_or(full);
        let slices = (0..len)
            .map(|j| {
                let mut acc = LaurentPoly::zero(self.first);
                for a in 0..=j {
                    acc = &acc + &(&self.slice(a) * &other.slice(j - a));
                }
                acc
            })
            .collect();
        BivariateTrunc::new(self.first, self.second, slices, self.exact && other.exact)
    }

    /// First coefficient `(i, j)` where both sides are known and differ.
    pub fn first_disagreement(&self, other: &Self) -> Option<(i64, usize)> {
        let len = self.known_len(other).unwrap_or(self.slices.len().max(other.slices.len()));
        for j in 0..len {
            let (a, b) = (self.slice(j), other.slice(j));
            if a != b {
                let diff = &a - &b;
                return Some((diff.min_exp().unwrap(), j));
            }
        }
        None
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_disagreement(other).is_none()
    }
}

impl fmt::Display for BivariateTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, s) in self.slices.iter().enumerate() {
            for (i, c) in s.terms().rev() {
                if j == 0 {
                    write_term(f, first, self.first, i, c)?;
                } else {
                    let sec = if j == 1 { self.second.to_string() } else { format!("{}^{j}", self.second) };
                    if i == 0 {
                        write_term(f, first, self.second, j as i64, c)?;
                    } else {
                        write_term(f, first, self.first, i, c)?;
                        write!(f, "*{sec}")?;
                    }
                }
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.exact {
            write!(f, " + ...{{valid to {}^{}}}", self.second, self.slices.len().saturating_sub(1))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BivariateTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
