use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;

use crate::scalars::Scalar;

use super::{monomial_weight, AlgebraSpec, Gen, Mode, Monomial, State, StateBuilder, StateWeight};

type ActKey = (Mode, Monomial);

/// The vacuum module of an algebra with a memoized PBW rewrite engine.
///
/// Mode actions are computed by commuting the incoming mode rightward
/// through a canonical monomial. Results per `(mode, monomial)` are cached;
/// the cache lock is never held across a recursive call.
pub struct VacuumModule {
    spec: AlgebraSpec,
    cache: Mutex<FxHashMap<ActKey, Arc<State>>>,
}

impl VacuumModule {
    pub fn new(spec: AlgebraSpec) -> Self {
        VacuumModule { spec, cache: Mutex::new(FxHashMap::default()) }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn cache_len(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    /// Act with the Lie mode `g_n` on a state.
    pub fn mode_act(&self, g: Gen, n: i64, v: &State) -> State {
        let x = Mode::new(g, n as i32);
        let mut acc = StateBuilder::new();
        for (m, c) in v.terms() {
            acc.add_scaled(&self.act_monomial(x, m), c);
        }
        acc.finish()
    }

    /// Act with a generating-field mode (`ω_k = L_{k-1}` for Virasoro).
    pub fn field_act(&self, g: Gen, k: i64, v: &State) -> State {
        self.mode_act(g, self.spec.lie_index(g, k), v)
    }

    pub fn act_monomial(&self, x: Mode, m: &Monomial) -> Arc<State> {
        // weight of the result is w - n; below zero nothing survives
        if monomial_weight(m) - (x.n as i64) < 0 {
            return Arc::new(State::zero());
        }
        if m.is_empty() {
            return Arc::new(if self.spec.is_creation(x.n) {
                State::from_monomial(Monomial::from_slice(&[x]))
            } else {
                State::zero()
            });
        }
        if self.spec.is_creation(x.n) && x <= m[0] {
            let mut out = Monomial::with_capacity(m.len() + 1);
            out.push(x);
            out.extend_from_slice(m);
            return Arc::new(State::from_monomial(out));
        }
        let key = (x, m.clone());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let result = Arc::new(self.reduce(x, m));
        self.cache.lock().unwrap().insert(key, result.clone());
        result
    }

    // x f R = f (x R) + [x, f] R
    fn reduce(&self, x: Mode, m: &Monomial) -> State {
        let f = m[0];
        let rest = Monomial::from_slice(&m[1..]);
        let mut acc = StateBuilder::new();
        let inner = self.act_monomial(x, &rest);
        for (mono, c) in inner.terms() {
            acc.add_scaled(&self.act_monomial(f, mono), c);
        }
        let br = self.spec.bracket(x, f);
        for (c, y) in &br.modes {
            acc.add_scaled(&self.act_monomial(*y, &rest), c);
        }
        if !br.central.is_zero() {
            acc.add_term(&rest, &br.central);
        }
        acc.finish()
    }

    /// `N` from the grading: the field mode `g_k` kills every state of
    /// weight `<= w` once `k >= w + Δ_g`.
    pub fn grading_bound(&self, g: Gen, v: &State) -> i64 {
        v.max_weight().map_or(i64::MIN, |w| w + self.spec.conformal_weight(g))
    }

    /// Smallest `N` with `g_k v = 0` for all field indices `k >= N`, found by
    /// sweeping down from the grading bound.
    pub fn truncation_bound(&self, g: Gen, v: &State) -> i64 {
        let Some(w) = v.max_weight() else {
            return i64::MIN;
        };
        let mut k = w + self.spec.conformal_weight(g);
        // the lowest weight is 0, so the sweep ends by k = -w - Δ at the latest
        while self.field_act(g, k - 1, v).is_zero() {
            k -= 1;
            if k < -(w + self.spec.conformal_weight(g)) - 1 {
                break;
            }
        }
        k
    }

    /// The translation operator, by `T vac = 0` and the derivation rule
    /// `T(x w) = [T, x] w + x T(w)` with `[T, g_k] = -k g_{k-1}` in field
    /// indices.
    pub fn translate(&self, v: &State) -> State {
        let mut acc = StateBuilder::new();
        for (m, c) in v.terms() {
            acc.add_scaled(&self.translate_monomial(m), c);
        }
        acc.finish()
    }

    fn translate_monomial(&self, m: &Monomial) -> State {
        if m.is_empty() {
            return State::zero();
        }
        let x = m[0];
        let rest = Monomial::from_slice(&m[1..]);
        let k = self.spec.field_index(x.gen, x.n as i64);
        let shifted = Mode::new(x.gen, x.n - 1);
        let mut acc = StateBuilder::new();
        acc.add_scaled(&self.act_monomial(shifted, &rest), &Scalar::from(-k));
        let t_rest = self.translate_monomial(&rest);
        for (mono, c) in t_rest.terms() {
            acc.add_scaled(&self.act_monomial(x, mono), c);
        }
        acc.finish()
    }

    /// All canonical monomials of weight `<= max_weight`, ordered by weight
    /// and then by monomial.
    pub fn enumerate_basis(&self, max_weight: u32) -> Vec<Monomial> {
        let max_weight = max_weight as i64;
        let top = if self.spec.is_creation(-1) { -1 } else { -2 };
        let gens: Vec<Gen> = self.spec.generators().collect();
        let mut modes = Vec::new();
        for n in (-max_weight..=top).rev() {
            for &g in &gens {
                modes.push(Mode::new(g, n as i32));
            }
        }
        modes.sort();
        let mut out = vec![Monomial::new()];
        let mut current = Monomial::new();
        fn extend(modes: &[Mode], start: usize, budget: i64, current: &mut Monomial, out: &mut Vec<Monomial>) {
            for (i, &x) in modes.iter().enumerate().skip(start) {
                let w = -(x.n as i64);
                if w > budget {
                    continue;
                }
                current.push(x);
                out.push(current.clone());
                extend(modes, i, budget - w, current, out);
                current.pop();
            }
        }
        extend(&modes, 0, max_weight, &mut current, &mut out);
        out.sort_by(|a, b| monomial_weight(a).cmp(&monomial_weight(b)).then_with(|| a.cmp(b)));
        out
    }

    pub fn basis_states(&self, max_weight: u32) -> Vec<State> {
        self.enumerate_basis(max_weight).into_iter().map(State::from_monomial).collect()
    }

    /// The weight of a state, or a marker when it mixes weights.
    pub fn weight(&self, v: &State) -> StateWeight {
        v.weight()
    }
}
