use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;

use crate::liealg::{monomial_weight, Monomial, State, StateBuilder, VacuumModule};
use crate::newton::binomial;
use crate::scalars::{Rational, Scalar};

use super::{FieldExpr, FieldKind};

type ModeKey = (FieldExpr, i64, Monomial);

/// Evaluates field modes on states, memoizing per `(field, mode, monomial)`.
pub struct Evaluator {
    module: Arc<VacuumModule>,
    cache: Mutex<FxHashMap<ModeKey, Arc<State>>>,
}

fn sign(i: i64) -> Rational {
    Rational::from_integer(if i.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, j| &acc * &Rational::from_integer(j))
}

impl Evaluator {
    pub fn new(module: Arc<VacuumModule>) -> Self {
        Evaluator { module, cache: Mutex::new(FxHashMap::default()) }
    }

    pub fn module(&self) -> &VacuumModule {
        &self.module
    }

    pub fn module_arc(&self) -> &Arc<VacuumModule> {
        &self.module
    }

    pub fn cache_len(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    /// `F_m v`.
    pub fn field_mode(&self, f: &FieldExpr, m: i64, v: &State) -> State {
        let mut acc = StateBuilder::new();
        for (mono, c) in v.terms() {
            acc.add_scaled(&self.field_mode_monomial(f, m, mono), c);
        }
        acc.finish()
    }

    /// `F_k v = 0` for every `k >= bound`, from the grading.
    pub fn grading_bound(&self, f: &FieldExpr, v: &State) -> i64 {
        match v.max_weight() {
            Some(w) if !f.is_zero() => w + f.weight(),
            _ => i64::MIN,
        }
    }

    pub fn field_mode_monomial(&self, f: &FieldExpr, m: i64, mono: &Monomial) -> Arc<State> {
        if f.is_zero() || monomial_weight(mono) + f.weight() - m - 1 < 0 {
            return Arc::new(State::zero());
        }
        match f.kind() {
            FieldKind::Generator(g) => {
                let spec = self.module.spec();
                let x = crate::liealg::Mode::new(*g, spec.lie_index(*g, m) as i32);
                return self.module.act_monomial(x, mono);
            }
            FieldKind::Identity => {
                return Arc::new(if m == -1 { State::from_monomial(mono.clone()) } else { State::zero() });
            }
            _ => {}
        }
        let key = (f.clone(), m, mono.clone());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let result = Arc::new(self.compute(f, m, mono));
        self.cache.lock().unwrap().insert(key, result.clone());
        result
    }

    fn compute(&self, f: &FieldExpr, m: i64, mono: &Monomial) -> State {
        let mut acc = StateBuilder::new();
        match f.kind() {
            FieldKind::Generator(_) | FieldKind::Identity => unreachable!("handled without caching"),
            FieldKind::Derivative(k, inner) => {
                // (∂^k F)_m = (-1)^k k! C(m, k) F_{m-k}
                let c = &(&sign(*k as i64) * &factorial(*k)) * &binomial(m, *k);
                if !c.is_zero() {
                    acc.add_scaled(&self.field_mode_monomial(inner, m - *k as i64, mono), &Scalar::from(c));
                }
            }
            FieldKind::Linear(terms) => {
                for (c, g) in terms {
                    acc.add_scaled(&self.field_mode_monomial(g, m, mono), c);
                }
            }
            FieldKind::ResidueProduct(n, a, b) => {
                let n = *n;
                let w = monomial_weight(mono);
                // B_{m+i} v = 0 once m+i >= w + Δ_B, and A_i v = 0 once i >= w + Δ_A
                let mut i_end = (w + b.weight() - m).max(w + a.weight()).max(0);
                if n >= 0 {
                    i_end = i_end.min(n + 1);
                }
                let outer_sign = sign(n);
                for i in 0..i_end {
                    let c = &sign(i) * &binomial(n, i as u32);
                    if c.is_zero() {
                        continue;
                    }
                    let bv = self.field_mode_monomial(b, m + i, mono);
                    if !bv.is_zero() {
                        acc.add_scaled(&self.field_mode(a, n - i, &bv), &Scalar::from(c.clone()));
                    }
                    let av = self.field_mode_monomial(a, i, mono);
                    if !av.is_zero() {
                        let c2 = -&(&c * &outer_sign);
                        acc.add_scaled(&self.field_mode(b, m + n - i, &av), &Scalar::from(c2));
                    }
                }
            }
        }
        acc.finish()
    }

    /// The `i`-sum of a residue product at `(m, v)` evaluated with `extra`
    /// additional terms beyond the truncation point.
    pub fn residue_product_padded(&self, n: i64, a: &FieldExpr, b: &FieldExpr, m: i64, v: &State, extra: i64) -> State {
        let mut acc = StateBuilder::new();
        let Some(w) = v.max_weight() else {
            return State::zero();
        };
        let i_end = (w + b.weight() - m).max(w + a.weight()).max(0) + extra;
        for i in 0..i_end {
            let c = &sign(i) * &binomial(n, i as u32);
            if c.is_zero() {
                continue;
            }
            let t1 = self.field_mode(a, n - i, &self.field_mode(b, m + i, v));
            let t2 = self.field_mode(b, m + n - i, &self.field_mode(a, i, v));
            acc.add_scaled(&t1, &Scalar::from(c.clone()));
            acc.add_scaled(&t2, &Scalar::from(-&(&c * &sign(n))));
        }
        acc.finish()
    }

    /// `C^n_{lm}(A, B) v = Σ_i (-1)^i C(n,i) (A_{l+n-i} B_{m+i} - (-1)^n B_{m+n-i} A_{l+i}) v`.
    pub fn c_component(&self, n: i64, a: &FieldExpr, b: &FieldExpr, l: i64, m: i64, v: &State) -> State {
        let Some(w) = v.max_weight() else {
            return State::zero();
        };
        let mut i_end = (w + b.weight() - m).max(w + a.weight() - l).max(0);
        if n >= 0 {
            i_end = i_end.min(n + 1);
        }
        let mut acc = StateBuilder::new();
        for i in 0..i_end {
            let c = &sign(i) * &binomial(n, i as u32);
            if c.is_zero() {
                continue;
            }
            let t1 = self.field_mode(a, l + n - i, &self.field_mode(b, m + i, v));
            let t2 = self.field_mode(b, m + n - i, &self.field_mode(a, l + i, v));
            acc.add_scaled(&t1, &Scalar::from(c.clone()));
            acc.add_scaled(&t2, &Scalar::from(-&(&c * &sign(n))));
        }
        acc.finish()
    }

    /// `[A_m, B_n] v`.
    pub fn commutator(&self, a: &FieldExpr, m: i64, b: &FieldExpr, n: i64, v: &State) -> State {
        let ab = self.field_mode(a, m, &self.field_mode(b, n, v));
        let ba = self.field_mode(b, n, &self.field_mode(a, m, v));
        ab.sub(&ba)
    }

    /// `:∂^(k)A B:_m v` computed directly from the split
    /// `A(x)_- B(y) + B(y) A(x)_+` of `A' = ∂^(k) A`.
    pub fn normal_ordered_direct(&self, k: u32, a: &FieldExpr, b: &FieldExpr, m: i64, v: &State) -> State {
        let Some(w) = v.max_weight() else {
            return State::zero();
        };
        let dk = |j: i64| &sign(k as i64) * &binomial(j, k);
        let mut acc = StateBuilder::new();
        // A'_j with j <= -1 on the left: needs B_{m-j-1} v != 0, i.e. j >= m - w - Δ_B
        let lo = m - w - b.weight();
        for j in lo..=-1 {
            let c = dk(j);
            if c.is_zero() {
                continue;
            }
            let t = self.field_mode(a, j - k as i64, &self.field_mode(b, m - j - 1, v));
            acc.add_scaled(&t, &Scalar::from(c));
        }
        // A'_j with j >= 0 on the right: A_{j-k} v = 0 once j - k >= w + Δ_A
        let hi = w + a.weight() + k as i64;
        for j in 0..hi {
            let c = dk(j);
            if c.is_zero() {
                continue;
            }
            let t = self.field_mode(b, m - j - 1, &self.field_mode(a, j - k as i64, v));
            acc.add_scaled(&t, &Scalar::from(c));
        }
        acc.finish()
    }
}
