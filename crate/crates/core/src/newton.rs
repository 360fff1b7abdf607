//! Newton forward differences on finite windows of doubly infinite
//! sequences, and the exact Newton-coefficient form of sequences killed by
//! some power of the difference operator.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::scalars::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("window of length {len} is too short for a difference of order {order}")]
    WindowTooShort { len: usize, order: usize },
    #[error("window must start at index 0, found base index {0}")]
    NotAnchored(i64),
    #[error("sequence is not polynomial of claimed order {order} on its window")]
    NotPolynomial { order: usize },
    #[error("iterated and alternating-sum differences disagree at offset {offset}")]
    DifferenceMismatch { offset: usize },
}

/// Generalized binomial coefficient `n (n-1) ... (n-i+1) / i!`, defined for
/// every integer `n`. Always an integer.
pub fn binomial(n: i64, i: u32) -> Rational {
    if let Some(v) = binomial_i128(n, i) {
        if let Ok(small) = i64::try_from(v) {
            return Rational::from_integer(small);
        }
        return Rational::from_bigint(BigInt::from(v));
    }
    let mut acc = BigInt::from(1);
    for j in 0..i as i64 {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    Rational::from_bigint(acc)
}

/// Exact in `i128` when no intermediate overflows; each partial product
/// `acc * (n - j)` is divisible by `j + 1` since `acc = C(n, j)`.
pub(crate) fn binomial_i128(n: i64, i: u32) -> Option<i128> {
    let mut acc: i128 = 1;
    for j in 0..i as i128 {
        acc = acc.checked_mul(n as i128 - j)? / (j + 1);
        if acc == 0 {
            return Some(0);
        }
    }
    Some(acc)
}

/// Finite window of a sequence: `values[j]` is the term at index `base + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceWindow {
    base: i64,
    values: Vec<Scalar>,
}

impl SequenceWindow {
    pub fn new(base: i64, values: Vec<Scalar>) -> Self {
        assert!(!values.is_empty(), "sequence window must be nonempty");
        SequenceWindow { base, values }
    }

    /// Sample `f` on the indices `base .. base + len`.
    pub fn sample(base: i64, len: usize, mut f: impl FnMut(i64) -> Scalar) -> Self {
        SequenceWindow::new(base, (0..len as i64).map(|j| f(base + j)).collect())
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// The term at absolute index `n`, if inside the window.
    pub fn get(&self, n: i64) -> Option<&Scalar> {
        usize::try_from(n - self.base).ok().and_then(|j| self.values.get(j))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    /// Relabel so the window starts at `base`.
    pub fn rebased(&self, base: i64) -> Self {
        SequenceWindow { base, values: self.values.clone() }
    }
}

impl fmt::Display for SequenceWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (j, v) in self.values.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "] @ {}", self.base)
    }
}

/// `(Δα)_n = α_{n+1} - α_n`, over the part of the window where it is defined.
pub fn forward_difference(w: &SequenceWindow) -> Result<SequenceWindow, NewtonError> {
    if w.len() < 2 {
        return Err(NewtonError::WindowTooShort { len: w.len(), order: 1 });
    }
    let values = w.values.windows(2).map(|p| &p[1] - &p[0]).collect();
    Ok(SequenceWindow { base: w.base, values })
}

/// `N`-th forward difference, computed both by iterating `Δ` and by the
/// alternating binomial sum `Σ_i (-1)^i C(N,i) α_{n+N-i}`; the two must agree.
pub fn nth_forward_difference(w: &SequenceWindow, order: usize) -> Result<SequenceWindow, NewtonError> {
    if w.len() < order + 1 {
        return Err(NewtonError::WindowTooShort { len: w.len(), order });
    }
    let mut iterated = w.clone();
    for _ in 0..order {
        iterated = forward_difference(&iterated)?;
    }
    let alternating = alternating_difference(w, order);
    for (offset, (a, b)) in iterated.values.iter().zip(&alternating).enumerate() {
        if a != b {
            return Err(NewtonError::DifferenceMismatch { offset });
        }
    }
    Ok(iterated)
}

fn alternating_difference(w: &SequenceWindow, order: usize) -> Vec<Scalar> {
    let out_len = w.len() - order;
    (0..out_len)
        .map(|j| {
            let mut acc = Scalar::zero();
            for i in 0..=order {
                let mut c = binomial(order as i64, i as u32);
                if i % 2 == 1 {
                    c = -c;
                }
                acc += &w.values[j + order - i].scale(&c);
            }
            acc
        })
        .collect()
}

/// A sequence in `ker Δ^N`, stored as Newton coefficients:
/// `α_n = Σ_i C(n, i) R_i` for every integer `n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolySequence {
    coeffs: Vec<Scalar>,
}

impl PolySequence {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        PolySequence { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Smallest `N` with the sequence in `ker Δ^N`.
    pub fn kernel_order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn evaluate(&self, n: i64) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, r) in self.coeffs.iter().enumerate() {
            acc += &r.scale(&binomial(n, i as u32));
        }
        acc
    }

    /// Newton form of `Δα`: since `Δ C(n,i) = C(n,i-1)` the coefficients
    /// shift down by one.
    pub fn difference(&self) -> PolySequence {
        PolySequence::new(self.coeffs.iter().skip(1).cloned().collect())
    }

    pub fn window(&self, base: i64, len: usize) -> SequenceWindow {
        SequenceWindow::sample(base, len, |n| self.evaluate(n))
    }
}

impl fmt::Display for PolySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// `R_i = (Δ^i α)_0` for `i < order`, after checking that `Δ^order` vanishes
/// across the window. The window must start at index 0.
pub fn newton_coefficients(w: &SequenceWindow, order: usize) -> Result<PolySequence, NewtonError> {
    if w.base != 0 {
        return Err(NewtonError::NotAnchored(w.base));
    }
    if w.len() < order + 1 {
        return Err(NewtonError::WindowTooShort { len: w.len(), order });
    }
    let mut coeffs = Vec::with_capacity(order);
    let mut current = w.clone();
    for _ in 0..order {
        coeffs.push(current.values[0].clone());
        current = forward_difference(&current)?;
    }
    if !current.is_zero() {
        return Err(NewtonError::NotPolynomial { order });
    }
    Ok(PolySequence::new(coeffs))
}

/// Result of searching a window for the smallest vanishing difference.
/// Only meaningful over the sampled indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelOrder {
    /// `Δ^order` vanishes on the window (and no lower power does).
    Within { order: usize, first: i64, last: i64 },
    /// No power of `Δ` that the window can resolve vanishes.
    NoKernelWithinWindow { first: i64, last: i64 },
}

impl KernelOrder {
    pub fn order(&self) -> Option<usize> {
        match self {
            KernelOrder::Within { order, .. } => Some(*order),
            KernelOrder::NoKernelWithinWindow { .. } => None,
        }
    }
}

impl fmt::Display for KernelOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelOrder::Within { order, first, last } => {
                write!(f, "{order} (valid on window {first}..{last})")
            }
            KernelOrder::NoKernelWithinWindow { first, last } => {
                write!(f, "no kernel within window {first}..{last}")
            }
        }
    }
}

pub fn kernel_order(w: &SequenceWindow) -> KernelOrder {
    let first = w.base;
    let last = w.base + w.len() as i64 - 1;
    let mut current = w.clone();
    for order in 0..w.len() {
        if current.is_zero() {
            return KernelOrder::Within { order, first, last };
        }
        match forward_difference(&current) {
            Ok(next) => current = next,
            Err(_) => break,
        }
    }
    KernelOrder::NoKernelWithinWindow { first, last }
}
