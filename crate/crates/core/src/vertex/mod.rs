//! The state-field correspondence `Y` built from iterated residue products,
//! and batch verifiers for the vertex-algebra identities.

mod modes;
mod report;
mod verify;

use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::fields::{Evaluator, FieldExpr, LocalityConfig};
use crate::liealg::{AlgebraSpec, Monomial, State, VacuumModule};
use crate::scalars::Scalar;

pub use modes::NotLinear;
pub use report::Report;
pub use verify::{Identity, ShiftedField};

/// Finite windows for identities quantified over the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerificationGrid {
    pub l_range: (i64, i64),
    pub m_range: (i64, i64),
    pub n_range: (i64, i64),
    pub weight_cutoff: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("empty {axis} range {lo}..{hi}")]
pub struct GridError {
    pub axis: &'static str,
    pub lo: i64,
    pub hi: i64,
}

impl Default for VerificationGrid {
    fn default() -> Self {
        VerificationGrid { l_range: (-3, 3), m_range: (-3, 3), n_range: (-3, 3), weight_cutoff: 6 }
    }
}

impl VerificationGrid {
    pub fn new(l_range: (i64, i64), m_range: (i64, i64), n_range: (i64, i64), weight_cutoff: u32) -> Result<Self, GridError> {
        for (axis, (lo, hi)) in [("l", l_range), ("m", m_range), ("n", n_range)] {
            if lo > hi {
                return Err(GridError { axis, lo, hi });
            }
        }
        Ok(VerificationGrid { l_range, m_range, n_range, weight_cutoff })
    }

    pub fn ls(&self) -> std::ops::RangeInclusive<i64> {
        self.l_range.0..=self.l_range.1
    }

    pub fn ms(&self) -> std::ops::RangeInclusive<i64> {
        self.m_range.0..=self.m_range.1
    }

    pub fn ns(&self) -> std::ops::RangeInclusive<i64> {
        self.n_range.0..=self.n_range.1
    }

    /// Locality detection on the `m` window, capped at weight 4, which
    /// already resolves every generator-pair order of the shipped algebras.
    pub fn locality_config(&self) -> LocalityConfig {
        LocalityConfig::new(self.m_range, self.weight_cutoff.min(4))
    }
}

/// A vertex algebra generated by the fields of one shipped algebra, with a
/// memo table for `Y`.
pub struct VertexAlgebraHandle {
    evaluator: Evaluator,
    generators: Vec<FieldExpr>,
    memo: Mutex<FxHashMap<Monomial, FieldExpr>>,
}

impl VertexAlgebraHandle {
    pub fn new(spec: AlgebraSpec) -> Self {
        let generators = spec.generators().map(|g| FieldExpr::generator(&spec, g)).collect();
        let evaluator = Evaluator::new(Arc::new(VacuumModule::new(spec)));
        VertexAlgebraHandle { evaluator, generators, memo: Mutex::new(FxHashMap::default()) }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        self.evaluator.module().spec()
    }

    pub fn module(&self) -> &VacuumModule {
        self.evaluator.module()
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn generators(&self) -> &[FieldExpr] {
        &self.generators
    }

    /// The states `g_{-1} vac` created by the generating fields.
    pub fn generator_states(&self) -> Vec<State> {
        let vac = State::vacuum();
        self.generators.iter().map(|g| self.evaluator.field_mode(g, -1, &vac)).collect()
    }

    /// `Y(a)`: for a monomial `g1_{n1} … gk_{nk} vac` (field indices) the
    /// right-nested composite `g1 *n1 (g2 *n2 (… (gk *nk I)))`, extended
    /// linearly. The innermost `g_{-1} I` is returned as the generator
    /// `g` itself, whose modes are identical.
    pub fn vertex_operator(&self, a: &State) -> FieldExpr {
        FieldExpr::linear(a.terms().map(|(m, c)| (c.clone(), self.vertex_operator_monomial(m))))
    }

    fn vertex_operator_monomial(&self, m: &Monomial) -> FieldExpr {
        if m.is_empty() {
            return FieldExpr::identity();
        }
        if let Some(hit) = self.memo.lock().unwrap().get(m) {
            return hit.clone();
        }
        let spec = self.spec();
        let x = m[0];
        let k = spec.field_index(x.gen, x.n as i64);
        let g = &self.generators[x.gen.0 as usize];
        let y = if m.len() == 1 && k == -1 {
            g.clone()
        } else {
            let rest = self.vertex_operator_monomial(&Monomial::from_slice(&m[1..]));
            FieldExpr::residue_product(k, g, &rest)
        };
        // first writer wins, so every reader sees one final value
        self.memo.lock().unwrap().entry(m.clone()).or_insert(y).clone()
    }

    /// The literal composite ending in `gk *nk I`, without the generator
    /// shortcut.
    pub fn generating_composite(&self, a: &State) -> FieldExpr {
        let spec = self.spec();
        FieldExpr::linear(a.terms().map(|(m, c)| {
            let mut f = FieldExpr::identity();
            for x in m.iter().rev() {
                let k = spec.field_index(x.gen, x.n as i64);
                f = FieldExpr::residue_product(k, &self.generators[x.gen.0 as usize], &f);
            }
            (c.clone(), f)
        }))
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    /// `a_n v = Y(a)_n v`.
    pub fn state_mode(&self, a: &State, n: i64, v: &State) -> State {
        self.evaluator.field_mode(&self.vertex_operator(a), n, v)
    }

    /// `T` on states.
    pub fn translate(&self, v: &State) -> State {
        self.module().translate(v)
    }

    /// `T^k v / k!`.
    pub fn divided_translate(&self, v: &State, k: u32) -> State {
        let mut out = v.clone();
        for j in 1..=k as i64 {
            out = self.translate(&out).scale(&Scalar::from(crate::scalars::Rational::new(1, j)));
        }
        out
    }

    pub fn basis(&self, weight_cutoff: u32) -> Vec<State> {
        self.module().basis_states(weight_cutoff)
    }
}
