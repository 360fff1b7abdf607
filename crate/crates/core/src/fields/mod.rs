//! Field expressions evaluated lazily as mode actions on states: residue
//! products for all `n`, derivatives, normal ordering, locality and OPEs.

mod checks;
mod eval;
mod parse;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rustc_hash::FxHasher;

use crate::liealg::{AlgebraSpec, Gen};
use crate::scalars::Scalar;

pub use checks::{
    CheckReport, CreativityReport, DerivativeLocalityReport, DongReport, LocalityConfig, LocalityReport,
    LocalityWitness, OpeTerm, Witness,
};
pub use eval::Evaluator;
pub use parse::ParseFieldError;

#[derive(Clone, PartialEq, Eq)]
pub enum FieldKind {
    Generator(Gen),
    Identity,
    /// `∂^k` of the child (not divided by `k!`).
    Derivative(u32, FieldExpr),
    Linear(Vec<(Scalar, FieldExpr)>),
    ResidueProduct(i64, FieldExpr, FieldExpr),
}

struct Node {
    kind: FieldKind,
    hash: u64,
    // conformal weight; i64::MIN for the zero field
    weight: i64,
}

/// An immutable, cheaply cloned field expression tree.
#[derive(Clone)]
pub struct FieldExpr(Arc<Node>);

impl PartialEq for FieldExpr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for FieldExpr {}

impl Hash for FieldExpr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl FieldExpr {
    fn make(kind: FieldKind, weight: i64) -> Self {
        let mut h = FxHasher::default();
        match &kind {
            FieldKind::Generator(g) => (0u8, g.0).hash(&mut h),
            FieldKind::Identity => 1u8.hash(&mut h),
            FieldKind::Derivative(k, f) => (2u8, *k, f.0.hash).hash(&mut h),
            FieldKind::Linear(terms) => {
                3u8.hash(&mut h);
                for (c, f) in terms {
                    c.hash(&mut h);
                    f.0.hash.hash(&mut h);
                }
            }
            FieldKind::ResidueProduct(n, a, b) => (4u8, *n, a.0.hash, b.0.hash).hash(&mut h),
        }
        FieldExpr(Arc::new(Node { kind, hash: h.finish(), weight }))
    }

    pub fn generator(spec: &AlgebraSpec, g: Gen) -> Self {
        FieldExpr::make(FieldKind::Generator(g), spec.conformal_weight(g))
    }

    pub fn identity() -> Self {
        FieldExpr::make(FieldKind::Identity, 0)
    }

    pub fn zero() -> Self {
        FieldExpr::make(FieldKind::Linear(Vec::new()), i64::MIN)
    }

    /// `∂^k f`; `k = 0` gives `f` and nested derivatives merge.
    pub fn derivative(k: u32, f: &FieldExpr) -> Self {
        if k == 0 {
            return f.clone();
        }
        if f.is_zero() {
            return FieldExpr::zero();
        }
        if let FieldKind::Derivative(j, inner) = f.kind() {
            return FieldExpr::derivative(k + j, inner);
        }
        FieldExpr::make(FieldKind::Derivative(k, f.clone()), f.weight().saturating_add(k as i64))
    }

    /// Flattens nested combinations, collects equal children and drops zeros.
    pub fn linear(terms: impl IntoIterator<Item = (Scalar, FieldExpr)>) -> Self {
        let mut out: Vec<(Scalar, FieldExpr)> = Vec::new();
        fn push(out: &mut Vec<(Scalar, FieldExpr)>, c: Scalar, f: FieldExpr) {
            if c.is_zero() {
                return;
            }
            if let FieldKind::Linear(inner) = f.kind() {
                for (d, g) in inner {
                    push(out, &c * d, g.clone());
                }
                return;
            }
            match out.iter_mut().find(|(_, g)| *g == f) {
                Some(slot) => slot.0 += &c,
                None => out.push((c, f)),
            }
        }
        for (c, f) in terms {
            push(&mut out, c, f);
        }
        out.retain(|(c, _)| !c.is_zero());
        if out.len() == 1 && out[0].0.is_one() {
            return out.pop().unwrap().1;
        }
        let weight = out.iter().map(|(_, f)| f.weight()).max().unwrap_or(i64::MIN);
        FieldExpr::make(FieldKind::Linear(out), weight)
    }

    pub fn residue_product(n: i64, a: &FieldExpr, b: &FieldExpr) -> Self {
        if a.is_zero() || b.is_zero() {
            return FieldExpr::zero();
        }
        FieldExpr::make(FieldKind::ResidueProduct(n, a.clone(), b.clone()), a.weight() + b.weight() - n - 1)
    }

    /// `:∂^(k) a  b:`, i.e. the residue product at `-k-1`.
    pub fn normal_ordered(k: u32, a: &FieldExpr, b: &FieldExpr) -> Self {
        FieldExpr::residue_product(-(k as i64) - 1, a, b)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        FieldExpr::linear([(c.clone(), self.clone())])
    }

    pub fn add(&self, other: &FieldExpr) -> Self {
        FieldExpr::linear([(Scalar::one(), self.clone()), (Scalar::one(), other.clone())])
    }

    pub fn sub(&self, other: &FieldExpr) -> Self {
        FieldExpr::linear([(Scalar::one(), self.clone()), (-Scalar::one(), other.clone())])
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    /// Conformal weight; the mode `F_k` changes state weight by `Δ - k - 1`.
    pub fn weight(&self) -> i64 {
        self.0.weight
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind(), FieldKind::Linear(t) if t.is_empty())
    }

    pub fn display<'a>(&'a self, spec: &'a AlgebraSpec) -> FieldDisplay<'a> {
        FieldDisplay { field: self, spec }
    }

    fn is_atomic(&self) -> bool {
        matches!(self.kind(), FieldKind::Generator(_) | FieldKind::Identity | FieldKind::ResidueProduct(..))
            || self.is_zero()
    }
}

/// Renders in the parser grammar: `h`, `d2h`, `(h *1 h)`, `2*e - f`.
pub struct FieldDisplay<'a> {
    field: &'a FieldExpr,
    spec: &'a AlgebraSpec,
}

impl fmt::Display for FieldDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spec = self.spec;
        match self.field.kind() {
            FieldKind::Generator(g) => f.write_str(spec.field_label(*g)),
            FieldKind::Identity => f.write_str("id"),
            FieldKind::Derivative(k, inner) => {
                let d = if *k == 1 { "d".to_string() } else { format!("d{k}") };
                if inner.is_atomic() {
                    write!(f, "{d}{}", inner.display(spec))
                } else {
                    write!(f, "{d}({})", inner.display(spec))
                }
            }
            FieldKind::ResidueProduct(n, a, b) => {
                let wrap = |x: &FieldExpr| {
                    if x.is_atomic() || matches!(x.kind(), FieldKind::Derivative(..)) {
                        x.display(spec).to_string()
                    } else {
                        format!("({})", x.display(spec))
                    }
                };
                write!(f, "({} *{n} {})", wrap(a), wrap(b))
            }
            FieldKind::Linear(terms) => {
                if terms.is_empty() {
                    return f.write_str("0");
                }
                let parts = terms
                    .iter()
                    .map(|(c, x)| {
                        let body = if x.is_atomic() || matches!(x.kind(), FieldKind::Derivative(..)) {
                            x.display(spec).to_string()
                        } else {
                            format!("({})", x.display(spec))
                        };
                        crate::liealg::signed_term(c, &body)
                    })
                    .collect();
                f.write_str(&crate::liealg::join_signed(parts))
            }
        }
    }
}

impl fmt::Debug for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FieldKind::Generator(g) => write!(f, "g{}", g.0),
            FieldKind::Identity => write!(f, "id"),
            FieldKind::Derivative(k, x) => write!(f, "d{k}({x:?})"),
            FieldKind::ResidueProduct(n, a, b) => write!(f, "({a:?} *{n} {b:?})"),
            FieldKind::Linear(t) => {
                write!(f, "[")?;
                for (i, (c, x)) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{c}*{x:?}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests;
