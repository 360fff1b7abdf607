use serde::Serialize;

use crate::formal::{delta_series, expand_binomial_in, FormalError, Var};
use crate::liealg::State;
use crate::newton::{binomial, nth_forward_difference, SequenceWindow};
use crate::scalars::{Rational, Scalar};

use super::{Evaluator, FieldExpr};

/// Window and limits for window-based locality detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalityConfig {
    /// Mode indices `l, m` tested, inclusive.
    pub window: (i64, i64),
    pub weight_cutoff: u32,
    /// Extra residue products `N+1 ..= N+slack` that must also vanish.
    pub slack: u32,
    /// Largest order searched before giving up.
    pub cap: u32,
}

impl Default for LocalityConfig {
    fn default() -> Self {
        LocalityConfig { window: (-3, 3), weight_cutoff: 4, slack: 3, cap: 16 }
    }
}

impl LocalityConfig {
    pub fn new(window: (i64, i64), weight_cutoff: u32) -> Self {
        LocalityConfig { window, weight_cutoff, ..Default::default() }
    }

    fn indices(&self) -> impl Iterator<Item = i64> + Clone {
        self.window.0..=self.window.1
    }
}

/// A nonzero cell: `(F *n G)_m v` when `l` is `None`, else `C^n_{lm} v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityWitness {
    pub n: i64,
    pub l: Option<i64>,
    pub m: i64,
    pub input: State,
    pub output: State,
}

#[derive(Debug, Clone)]
pub struct LocalityReport {
    pub fields: (FieldExpr, FieldExpr),
    pub config: LocalityConfig,
    /// `None` when no order up to the cap certifies on the window.
    pub order: Option<u32>,
    /// A nonzero cell at `order - 1`, certifying minimality; or, when not
    /// local, a nonzero cell at the cap.
    pub witness: Option<LocalityWitness>,
    pub cells_checked: usize,
}

impl LocalityReport {
    pub fn is_local(&self) -> bool {
        self.order.is_some()
    }

    pub fn status(&self) -> &'static str {
        if self.is_local() {
            "verified on window"
        } else {
            "not local on window"
        }
    }
}

/// A failed cell, rendered for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub context: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub cells_checked: usize,
    pub failures: Vec<Witness>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), cells_checked: 0, failures: Vec::new() }
    }

    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn absorb(&mut self, other: CheckReport) {
        self.cells_checked += other.cells_checked;
        self.failures.extend(other.failures);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CreativityReport {
    pub expected: State,
    /// `F_{-1} vac`.
    pub created: State,
    /// Modes `n >= 0` with `F_n vac != 0`.
    pub violations: Vec<(i64, State)>,
}

impl CreativityReport {
    pub fn holds(&self) -> bool {
        self.created == self.expected && self.violations.is_empty()
    }
}

/// One singular OPE term: `(F *_{pole-1} G)_{-1} vac / (x-y)^pole`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpeTerm {
    pub pole: u32,
    pub state: State,
}

#[derive(Debug, Clone)]
pub struct DerivativeLocalityReport {
    pub base: LocalityReport,
    pub derived: LocalityReport,
}

impl DerivativeLocalityReport {
    pub fn holds(&self) -> bool {
        match (self.base.order, self.derived.order) {
            (Some(n), Some(d)) => d <= n + 1,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DongReport {
    pub k: u32,
    pub l: u32,
    pub m: u32,
    pub n: i64,
    pub bound: i64,
    pub measured: Option<u32>,
    pub holds: bool,
}

fn sign(i: i64) -> Rational {
    Rational::from_integer(if i.rem_euclid(2) == 0 { 1 } else { -1 })
}

impl Evaluator {
    fn witness(&self, context: String, lhs: &State, rhs: &State) -> Witness {
        let spec = self.module().spec();
        Witness { context, lhs: lhs.display(spec).to_string(), rhs: rhs.display(spec).to_string() }
    }

    fn describe(&self, v: &State) -> String {
        v.display(self.module().spec()).to_string()
    }

    /// First `(m, v)` in the window with `F_m v != 0`.
    pub fn acts_as_zero(&self, f: &FieldExpr, window: (i64, i64), weight_cutoff: u32) -> Option<(i64, State, State)> {
        let basis = self.module().basis_states(weight_cutoff);
        for m in window.0..=window.1 {
            for v in &basis {
                let out = self.field_mode(f, m, v);
                if !out.is_zero() {
                    return Some((m, v.clone(), out));
                }
            }
        }
        None
    }

    /// Compare `A_m v` and `B_m v` for `m` in the window and every basis
    /// state up to the cutoff.
    pub fn compare_mode_tables(
        &self,
        name: &str,
        a: &FieldExpr,
        b: &FieldExpr,
        window: (i64, i64),
        weight_cutoff: u32,
    ) -> CheckReport {
        let mut report = CheckReport::new(name);
        let basis = self.module().basis_states(weight_cutoff);
        for m in window.0..=window.1 {
            for v in &basis {
                report.cells_checked += 1;
                let lhs = self.field_mode(a, m, v);
                let rhs = self.field_mode(b, m, v);
                if lhs != rhs {
                    report.failures.push(self.witness(format!("m={m} v={}", self.describe(v)), &lhs, &rhs));
                }
            }
        }
        report
    }

    /// Smallest `N >= 0` such that `F *n G` kills the tested states for
    /// `N <= n <= N + slack` and `C^N_{lm}(F, G)` kills them for `l, m` in
    /// the window.
    pub fn locality_order(&self, f: &FieldExpr, g: &FieldExpr, cfg: &LocalityConfig) -> LocalityReport {
        let basis = self.module().basis_states(cfg.weight_cutoff);
        let mut cells = 0usize;
        let mut rp_memo: Vec<Option<Option<LocalityWitness>>> = Vec::new();
        let mut rp_nonzero = |n: i64, cells: &mut usize| -> Option<LocalityWitness> {
            let idx = n as usize;
            if rp_memo.len() <= idx {
                rp_memo.resize(idx + 1, None);
            }
            if let Some(hit) = &rp_memo[idx] {
                return hit.clone();
            }
            let rp = FieldExpr::residue_product(n, f, g);
            let mut found = None;
            'outer: for m in cfg.indices() {
                for v in &basis {
                    *cells += 1;
                    let out = self.field_mode(&rp, m, v);
                    if !out.is_zero() {
                        found = Some(LocalityWitness { n, l: None, m, input: v.clone(), output: out });
                        break 'outer;
                    }
                }
            }
            rp_memo[idx] = Some(found.clone());
            found
        };
        let c_nonzero = |n: i64, cells: &mut usize| -> Option<LocalityWitness> {
            for l in cfg.indices() {
                for m in cfg.indices() {
                    for v in &basis {
                        *cells += 1;
                        let out = self.c_component(n, f, g, l, m, v);
                        if !out.is_zero() {
                            return Some(LocalityWitness { n, l: Some(l), m, input: v.clone(), output: out });
                        }
                    }
                }
            }
            None
        };
        let mut order = None;
        let mut witness = None;
        for big_n in 0..=cfg.cap as i64 {
            let blocked = (big_n..=big_n + cfg.slack as i64).find_map(|n| rp_nonzero(n, &mut cells));
            if let Some(w) = blocked {
                witness = Some(w);
                continue;
            }
            if let Some(w) = c_nonzero(big_n, &mut cells) {
                witness = Some(w);
                continue;
            }
            order = Some(big_n as u32);
            if big_n > 0 {
                witness = rp_nonzero(big_n - 1, &mut cells).or_else(|| c_nonzero(big_n - 1, &mut cells));
            } else {
                witness = None;
            }
            break;
        }
        LocalityReport { fields: (f.clone(), g.clone()), config: *cfg, order, witness, cells_checked: cells }
    }

    /// `F_{-1} vac = a` and `F_n vac = 0` for `0 <= n <= z_orders`.
    pub fn creativity_check(&self, f: &FieldExpr, a: &State, z_orders: u32) -> CreativityReport {
        let vac = State::vacuum();
        let created = self.field_mode(f, -1, &vac);
        let violations = (0..=z_orders as i64)
            .filter_map(|n| {
                let out = self.field_mode(f, n, &vac);
                (!out.is_zero()).then_some((n, out))
            })
            .collect();
        CreativityReport { expected: a.clone(), created, violations }
    }

    /// `(F *i G)_{-1} vac` for `i` from `N-1` down to `0`, including zero
    /// numerators.
    pub fn ope_singular_part(&self, f: &FieldExpr, g: &FieldExpr, cfg: &LocalityConfig) -> Result<Vec<OpeTerm>, Box<LocalityReport>> {
        let report = self.locality_order(f, g, cfg);
        let Some(order) = report.order else {
            return Err(Box::new(report));
        };
        let vac = State::vacuum();
        Ok((0..order)
            .rev()
            .map(|i| OpeTerm {
                pole: i + 1,
                state: self.field_mode(&FieldExpr::residue_product(i as i64, f, g), -1, &vac),
            })
            .collect())
    }

    /// The residue product at `-k-1` against the direct `±` split.
    pub fn normal_ordered_check(&self, k: u32, f: &FieldExpr, g: &FieldExpr, window: (i64, i64), weight_cutoff: u32) -> CheckReport {
        let mut report = CheckReport::new("normal ordering");
        let rp = FieldExpr::normal_ordered(k, f, g);
        for m in window.0..=window.1 {
            for v in self.module().basis_states(weight_cutoff) {
                report.cells_checked += 1;
                let lhs = self.field_mode(&rp, m, &v);
                let rhs = self.normal_ordered_direct(k, f, g, m, &v);
                if lhs != rhs {
                    report.failures.push(self.witness(format!("k={k} m={m} v={}", self.describe(&v)), &lhs, &rhs));
                }
            }
        }
        report
    }

    /// `order(∂F, G) <= order(F, G) + 1` on the same window.
    pub fn derivative_locality_check(&self, f: &FieldExpr, g: &FieldExpr, cfg: &LocalityConfig) -> DerivativeLocalityReport {
        let base = self.locality_order(f, g, cfg);
        let derived = self.locality_order(&FieldExpr::derivative(1, f), g, cfg);
        DerivativeLocalityReport { base, derived }
    }

    /// `∂(F *n G) = (∂F) *n G + F *n (∂G)` as mode tables.
    pub fn derivation_of_products_check(
        &self,
        f: &FieldExpr,
        g: &FieldExpr,
        n: i64,
        window: (i64, i64),
        weight_cutoff: u32,
    ) -> CheckReport {
        let lhs = FieldExpr::derivative(1, &FieldExpr::residue_product(n, f, g));
        let rhs = FieldExpr::residue_product(n, &FieldExpr::derivative(1, f), g)
            .add(&FieldExpr::residue_product(n, f, &FieldExpr::derivative(1, g)));
        self.compare_mode_tables("derivation of products", &lhs, &rhs, window, weight_cutoff)
    }

    /// `order(F *n G, H) <= K + L + M - n - 1` with `K, L, M` the pairwise
    /// orders of `(F, G)`, `(F, H)`, `(G, H)`.
    pub fn dong_bound_check(&self, f: &FieldExpr, g: &FieldExpr, h: &FieldExpr, n: i64, cfg: &LocalityConfig) -> DongReport {
        let k = self.locality_order(f, g, cfg).order;
        let l = self.locality_order(f, h, cfg).order;
        let m = self.locality_order(g, h, cfg).order;
        let measured = self.locality_order(&FieldExpr::residue_product(n, f, g), h, cfg).order;
        let (k, l, m) = (k.unwrap_or(u32::MAX), l.unwrap_or(u32::MAX), m.unwrap_or(u32::MAX));
        let pairwise = k != u32::MAX && l != u32::MAX && m != u32::MAX;
        let bound = if pairwise { k as i64 + l as i64 + m as i64 - n - 1 } else { i64::MAX };
        let holds = pairwise && measured.is_some_and(|x| x as i64 <= bound);
        DongReport { k, l, m, n, bound, measured, holds }
    }

    /// If `F` kills the vacuum in every window mode, it kills every basis
    /// state up to the cutoff. Vacuum-nonkilling fields pass vacuously.
    pub fn zero_field_check(&self, f: &FieldExpr, window: (i64, i64), weight_cutoff: u32) -> CheckReport {
        let mut report = CheckReport::new("zero field");
        let vac = State::vacuum();
        let kills_vacuum = (window.0..=window.1).all(|m| self.field_mode(f, m, &vac).is_zero());
        if !kills_vacuum {
            return report;
        }
        if let Some((m, v, out)) = self.acts_as_zero(f, window, weight_cutoff) {
            report.failures.push(self.witness(format!("m={m} v={}", self.describe(&v)), &out, &State::zero()));
        }
        report.cells_checked = (window.1 - window.0 + 1) as usize * self.module().basis_states(weight_cutoff).len();
        report
    }

    /// `[F_m, G_n] = Σ_{i<N} C(m,i) (F *i G)_{m+n-i}` on the window.
    pub fn commutator_formula_check(
        &self,
        f: &FieldExpr,
        g: &FieldExpr,
        order: u32,
        window: (i64, i64),
        weight_cutoff: u32,
    ) -> CheckReport {
        let mut report = CheckReport::new("commutator formula");
        let products: Vec<FieldExpr> = (0..order as i64).map(|i| FieldExpr::residue_product(i, f, g)).collect();
        let basis = self.module().basis_states(weight_cutoff);
        for m in window.0..=window.1 {
            for n in window.0..=window.1 {
                for v in &basis {
                    report.cells_checked += 1;
                    let lhs = self.commutator(f, m, g, n, v);
                    let mut rhs = State::zero();
                    for (i, p) in products.iter().enumerate() {
                        let c = binomial(m, i as u32);
                        if !c.is_zero() {
                            rhs = rhs.add(&self.field_mode(p, m + n - i as i64, v).scale(&Scalar::from(c)));
                        }
                    }
                    if lhs != rhs {
                        report
                            .failures
                            .push(self.witness(format!("m={m} n={n} v={}", self.describe(v)), &lhs, &rhs));
                    }
                }
            }
        }
        report
    }

    /// `Σ_{i<=N} (-1)^i C(N,i) [F_{n-i}, G_{q+i}] = 0`, the mode form of
    /// `Σ C(N,i) (-y)^i [F_{n-i}, G(y)] = 0`.
    pub fn alternating_commutator_check(
        &self,
        f: &FieldExpr,
        g: &FieldExpr,
        order: u32,
        window: (i64, i64),
        weight_cutoff: u32,
    ) -> CheckReport {
        let mut report = CheckReport::new("alternating commutator sum");
        let basis = self.module().basis_states(weight_cutoff);
        for n in window.0..=window.1 {
            for q in window.0..=window.1 {
                for v in &basis {
                    report.cells_checked += 1;
                    let mut total = State::zero();
                    for i in 0..=order as i64 {
                        let c = &sign(i) * &binomial(order as i64, i as u32);
                        total = total.add(&self.commutator(f, n - i, g, q + i, v).scale(&Scalar::from(c)));
                    }
                    if !total.is_zero() {
                        report
                            .failures
                            .push(self.witness(format!("n={n} q={q} v={}", self.describe(v)), &total, &State::zero()));
                    }
                }
            }
        }
        report
    }

    /// `y^{-m} [F_m, G(y)]` is polynomial in `m` of degree `< N`: on each
    /// `y`-component `p` and state, the sequence `m ↦ [F_m, G_{p-m}] v`
    /// lies in the kernel of `Δ^N` along the window.
    pub fn polynomial_commutator_check(
        &self,
        f: &FieldExpr,
        g: &FieldExpr,
        order: u32,
        window: (i64, i64),
        weight_cutoff: u32,
    ) -> CheckReport {
        let mut report = CheckReport::new("polynomial commutator");
        let basis = self.module().basis_states(weight_cutoff);
        let len = (window.1 - window.0 + 1) as usize;
        for p in window.0..=window.1 {
            for v in &basis {
                report.cells_checked += 1;
                let column: Vec<State> = (window.0..=window.1).map(|m| self.commutator(f, m, g, p - m, v)).collect();
                let mut monomials: Vec<_> = column.iter().flat_map(|s| s.terms().map(|(mono, _)| mono.clone())).collect();
                monomials.sort();
                monomials.dedup();
                for mono in monomials {
                    let seq = SequenceWindow::new(window.0, column.iter().map(|s| s.coeff(&mono)).collect());
                    let ok = len <= order as usize
                        || nth_forward_difference(&seq, order as usize).map(|d| d.is_zero()).unwrap_or(false);
                    if !ok {
                        report.failures.push(Witness {
                            context: format!("p={p} v={} component {mono:?}", self.describe(v)),
                            lhs: seq.to_string(),
                            rhs: format!("kernel of Δ^{order}"),
                        });
                    }
                }
            }
        }
        report
    }

    /// `[F(x), G(y)] = Σ_{i<N} y^{-i-1} δ^(i)(x/y) (F *i G)(y)` on the
    /// coefficient of `x^{-m-1} y^{-n-1}`, with the delta coefficients read
    /// from truncated delta series.
    pub fn delta_commutator_check(
        &self,
        f: &FieldExpr,
        g: &FieldExpr,
        order: u32,
        window: (i64, i64),
        weight_cutoff: u32,
    ) -> Result<CheckReport, FormalError> {
        let mut report = CheckReport::new("delta-series commutator");
        let basis = self.module().basis_states(weight_cutoff);
        // δ^(i)(z) coefficient of z^{-m-1} is C(m, i)
        let deltas = (0..order)
            .map(|i| delta_series(i, -window.1 - 1, -window.0 - 1))
            .collect::<Result<Vec<_>, _>>()?;
        let products: Vec<FieldExpr> = (0..order as i64).map(|i| FieldExpr::residue_product(i, f, g)).collect();
        for m in window.0..=window.1 {
            for n in window.0..=window.1 {
                for v in &basis {
                    report.cells_checked += 1;
                    let lhs = self.commutator(f, m, g, n, v);
                    let mut rhs = State::zero();
                    for (i, (d, p)) in deltas.iter().zip(&products).enumerate() {
                        let c = d.coeff(-m - 1)?;
                        if !c.is_zero() {
                            rhs = rhs.add(&self.field_mode(p, m + n - i as i64, v).scale(&c));
                        }
                    }
                    if lhs != rhs {
                        report
                            .failures
                            .push(self.witness(format!("m={m} n={n} v={}", self.describe(v)), &lhs, &rhs));
                    }
                }
            }
        }
        Ok(report)
    }

    /// `[F(x)_+, G(y)] = Σ (F *i G)(y) / (x-y)^{i+1}` and
    /// `[F(x)_-, G(y)] = -Σ (F *i G)(y) / (-y+x)^{i+1}`, with both kernels
    /// expanded through the bivariate binomial expansion. `F(x)_+` collects
    /// the modes `F_m`, `m >= 0`.
    pub fn split_commutator_check(
        &self,
        f: &FieldExpr,
        g: &FieldExpr,
        order: u32,
        window: (i64, i64),
        weight_cutoff: u32,
    ) -> Result<CheckReport, FormalError> {
        let mut report = CheckReport::new("split commutator");
        let basis = self.module().basis_states(weight_cutoff);
        let depth = (window.1.abs().max(window.0.abs()) + order as i64 + 2) as u32;
        let minus_one = -Rational::one();
        let plus: Vec<_> =
            (0..order as i64).map(|i| expand_binomial_in(Var::X, Var::Y, -i - 1, depth).scale_second(&minus_one)).collect();
        let minus: Vec<_> =
            (0..order as i64).map(|i| expand_binomial_in(Var::Y, Var::X, -i - 1, depth).scale_first(&minus_one)).collect();
        let products: Vec<FieldExpr> = (0..order as i64).map(|i| FieldExpr::residue_product(i, f, g)).collect();
        let missing = |what: &str| FormalError::IdentityViolation(format!("{what} expansion truncated too early"));
        for m in window.0..=window.1 {
            for n in window.0..=window.1 {
                for v in &basis {
                    report.cells_checked += 1;
                    let lhs = self.commutator(f, m, g, n, v);
                    let mut rhs = State::zero();
                    for (i, p) in products.iter().enumerate() {
                        let i = i as i64;
                        // both kernels put y^{m-i} against x^{-m-1}, so the
                        // product mode is m + n - i
                        let c = if m >= 0 {
                            if m < i {
                                continue;
                            }
                            plus[i as usize].coeff(-m - 1, (m - i) as usize).ok_or_else(|| missing("plus"))?
                        } else {
                            let j = (-m - 1) as usize;
                            -minus[i as usize].coeff(m - i, j).ok_or_else(|| missing("minus"))?
                        };
                        if c.is_zero() {
                            continue;
                        }
                        rhs = rhs.add(&self.field_mode(p, m + n - i, v).scale(&c));
                    }
                    if lhs != rhs {
                        report
                            .failures
                            .push(self.witness(format!("m={m} n={n} v={}", self.describe(v)), &lhs, &rhs));
                    }
                }
            }
        }
        Ok(report)
    }
}
