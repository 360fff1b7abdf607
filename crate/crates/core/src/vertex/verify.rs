use std::str::FromStr;
use std::time::Instant;

use crate::fields::{DongReport, FieldExpr, LocalityConfig};
use crate::formal::{expand_binomial_in, FormalError, Var};
use crate::liealg::{AlgebraKind, State, StateBuilder};
use crate::newton::binomial;
use crate::scalars::{Rational, Scalar};

use super::{Report, VerificationGrid, VertexAlgebraHandle};

fn sign(i: i64) -> Rational {
    Rational::from_integer(if i.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, j| &acc * &Rational::from_integer(j))
}

fn weight(v: &State) -> i64 {
    v.max_weight().unwrap_or(0)
}

/// A candidate field `Σ c · z^s F(z)`, whose modes are `Σ c F_{m+s}`; used
/// to build creative fields that are not translation covariant.
#[derive(Debug, Clone)]
pub struct ShiftedField {
    terms: Vec<(Scalar, FieldExpr, i64)>,
}

impl ShiftedField {
    pub fn new(base: &FieldExpr) -> Self {
        ShiftedField { terms: vec![(Scalar::one(), base.clone(), 0)] }
    }

    /// Adds `c · z^shift F(z)`.
    pub fn plus(mut self, c: Scalar, f: &FieldExpr, shift: i64) -> Self {
        self.terms.push((c, f.clone(), shift));
        self
    }

    pub fn mode(&self, h: &VertexAlgebraHandle, m: i64, v: &State) -> State {
        let mut acc = StateBuilder::new();
        for (c, f, s) in &self.terms {
            acc.add_scaled(&h.evaluator().field_mode(f, m + s, v), c);
        }
        acc.finish()
    }
}

/// The identities the command line can run over a full grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    Bflm,
    Commutator,
    Associator,
    Skew,
    Translation,
    Dong,
    LocalityEquivalences,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::Bflm,
        Identity::Commutator,
        Identity::Associator,
        Identity::Skew,
        Identity::Translation,
        Identity::Dong,
        Identity::LocalityEquivalences,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Bflm => "bflm",
            Identity::Commutator => "commutator",
            Identity::Associator => "associator",
            Identity::Skew => "skew",
            Identity::Translation => "translation",
            Identity::Dong => "dong",
            Identity::LocalityEquivalences => "locality-equivalences",
        }
    }
}

impl FromStr for Identity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| format!("unknown identity `{s}`; expected one of {}", Identity::ALL.map(Identity::name).join(", ")))
    }
}

impl VertexAlgebraHandle {
    fn report(&self, identity: &str, grid: &VerificationGrid) -> Report {
        Report::new(identity, self.spec().name(), *grid)
    }

    fn show(&self, v: &State) -> String {
        v.display(self.spec()).to_string()
    }

    fn check_cell(&self, report: &mut Report, context: impl FnOnce() -> String, lhs: &State, rhs: &State) {
        report.cells_checked += 1;
        if lhs != rhs {
            let ctx = context();
            report.fail(ctx, self.show(lhs), self.show(rhs));
        }
    }

    /// `(i, Y(a_i b))` for the nonzero `a_i b` with `i >= from`; `a_i b`
    /// vanishes by grading once `i >= wt(a) + wt(b)`.
    fn products(&self, a: &State, b: &State, from: i64) -> Vec<(i64, FieldExpr)> {
        let top = weight(a) + weight(b);
        (from..top)
            .filter_map(|i| {
                let s = self.state_mode(a, i, b);
                (!s.is_zero()).then(|| (i, self.vertex_operator(&s)))
            })
            .collect()
    }

    /// `[a_m, b_n] = Σ_i C(m,i) (a_i b)_{m+n-i}` on every grid state.
    pub fn verify_commutator(&self, a: &State, b: &State, grid: &VerificationGrid) -> Report {
        let start = Instant::now();
        let mut report = self.report("commutator", grid);
        let (ya, yb) = (self.vertex_operator(a), self.vertex_operator(b));
        let products = self.products(a, b, 0);
        let ev = self.evaluator();
        for v in self.basis(grid.weight_cutoff) {
            for m in grid.ms() {
                for n in grid.ns() {
                    let lhs = ev.commutator(&ya, m, &yb, n, &v);
                    let mut acc = StateBuilder::new();
                    for (i, p) in &products {
                        let c = binomial(m, *i as u32);
                        if !c.is_zero() {
                            acc.add_scaled(&ev.field_mode(p, m + n - i, &v), &Scalar::from(c));
                        }
                    }
                    let rhs = acc.finish();
                    self.check_cell(&mut report, || format!("a={} b={} m={m} n={n} v={}", self.show(a), self.show(b), self.show(&v)), &lhs, &rhs);
                }
            }
        }
        report.finish(start.elapsed())
    }

    /// The commutator formula against the defining relations for every
    /// generator pair; `m` and `n` range over Lie indices.
    pub fn verify_commutator_relations(&self, grid: &VerificationGrid) -> Report {
        let start = Instant::now();
        let mut report = self.report("commutator relations", grid);
        let spec = self.spec();
        let ev = self.evaluator();
        let states = self.generator_states();
        let gens: Vec<_> = spec.generators().collect();
        let basis = self.basis(grid.weight_cutoff);
        for (x, a) in gens.iter().zip(&states) {
            for (y, b) in gens.iter().zip(&states) {
                let products = self.products(a, b, 0);
                for m in grid.ms() {
                    for n in grid.ns() {
                        let (fm, fn_) = (spec.field_index(*x, m), spec.field_index(*y, n));
                        let br = spec.bracket(crate::liealg::Mode::new(*x, m as i32), crate::liealg::Mode::new(*y, n as i32));
                        for v in &basis {
                            let mut acc = StateBuilder::new();
                            for (i, p) in &products {
                                let c = binomial(fm, *i as u32);
                                if !c.is_zero() {
                                    acc.add_scaled(&ev.field_mode(p, fm + fn_ - i, v), &Scalar::from(c));
                                }
                            }
                            let lhs = acc.finish();
                            let mut acc = StateBuilder::new();
                            for (c, z) in &br.modes {
                                acc.add_scaled(&self.module().mode_act(z.gen, z.n as i64, v), c);
                            }
                            acc.add_scaled(v, &br.central);
                            let rhs = acc.finish();
                            self.check_cell(
                                &mut report,
                                || {
                                    format!(
                                        "[{}, {}] on {}",
                                        spec.display_mode(crate::liealg::Mode::new(*x, m as i32)),
                                        spec.display_mode(crate::liealg::Mode::new(*y, n as i32)),
                                        self.show(v)
                                    )
                                },
                                &lhs,
                                &rhs,
                            );
                        }
                    }
                }
            }
        }
        report.finish(start.elapsed())
    }

    /// `(a_n b)_m = Σ_i (-1)^i C(n,i) (a_{n-i} b_{m+i} - (-1)^n b_{m+n-i} a_i)`.
    pub fn verify_associator(&self, a: &State, b: &State, grid: &VerificationGrid) -> Report {
        let start = Instant::now();
        let mut report = self.report("associator", grid);
        let (ya, yb) = (self.vertex_operator(a), self.vertex_operator(b));
        let ev = self.evaluator();
        for n in grid.ns() {
            let left = self.vertex_operator(&self.state_mode(a, n, b));
            for m in grid.ms() {
                for v in self.basis(grid.weight_cutoff) {
                    let lhs = ev.field_mode(&left, m, &v);
                    let rhs = ev.c_component(n, &ya, &yb, 0, m, &v);
                    self.check_cell(&mut report, || format!("a={} b={} n={n} m={m} v={}", self.show(a), self.show(b), self.show(&v)), &lhs, &rhs);
                }
            }
        }
        report.finish(start.elapsed())
    }

    /// `Σ_i C(l,i) (a_{n+i} b)_{l+m-i} = Σ_i (-1)^i C(n,i) (a_{l+n-i} b_{m+i} - (-1)^n b_{m+n-i} a_{l+i})`.
    pub fn verify_bflm(&self, a: &State, b: &State, grid: &VerificationGrid) -> Report {
        let start = Instant::now();
        let mut report = self.report("bflm", grid);
        let (ya, yb) = (self.vertex_operator(a), self.vertex_operator(b));
        let ev = self.evaluator();
        let basis = self.basis(grid.weight_cutoff);
        for n in grid.ns() {
            let products = self.products(a, b, n);
            for l in grid.ls() {
                for m in grid.ms() {
                    for v in &basis {
                        let mut acc = StateBuilder::new();
                        for (j, p) in &products {
                            let i = j - n;
                            let c = binomial(l, i as u32);
                            if !c.is_zero() {
                                acc.add_scaled(&ev.field_mode(p, l + m - i, v), &Scalar::from(c));
                            }
                        }
                        let lhs = acc.finish();
                        let rhs = ev.c_component(n, &ya, &yb, l, m, v);
                        self.check_cell(
                            &mut report,
                            || format!("a={} b={} l={l} m={m} n={n} v={}", self.show(a), self.show(b), self.show(v)),
                            &lhs,
                            &rhs,
                        );
                    }
                }
            }
        }
        report.finish(start.elapsed())
    }

    /// The residue form `Res_x x^l [(x-y)^n a(x) b(y) - (-y+x)^n b(y) a(x)]`
    /// at `y^{-m-1}`, with both binomials expanded by the formal module,
    /// against the left side of the BFLM identity.
    pub fn verify_bflm_delta_form(&self, a: &State, b: &State, grid: &VerificationGrid) -> Result<Report, FormalError> {
        let start = Instant::now();
        let mut report = self.report("bflm delta form", grid);
        let (ya, yb) = (self.vertex_operator(a), self.vertex_operator(b));
        let ev = self.evaluator();
        let basis = self.basis(grid.weight_cutoff);
        let minus_one = -Rational::one();
        let reach = grid.weight_cutoff as i64 + weight(a).max(weight(b)) + 1;
        for n in grid.ns() {
            let products = self.products(a, b, n);
            for l in grid.ls() {
                for m in grid.ms() {
                    // b_{m+j} v and a_{l+j} v vanish once the index passes the grading bound
                    let depth = (reach - m.min(l)).max(0) as u32 + 1;
                    let plus = expand_binomial_in(Var::X, Var::Y, n, depth).scale_second(&minus_one);
                    let minus = expand_binomial_in(Var::Y, Var::X, n, depth).scale_first(&minus_one);
                    let top = if n >= 0 { n as usize } else { depth as usize };
                    for v in &basis {
                        let mut acc = StateBuilder::new();
                        for j in 0..=top {
                            let ji = j as i64;
                            let missing = || FormalError::IdentityViolation(format!("expansion too shallow at j={j}"));
                            // x^{n-j} y^j from (x-y)^n
                            let c1 = plus.coeff(n - ji, j).ok_or_else(missing)?;
                            if !c1.is_zero() {
                                let t = ev.field_mode(&ya, l + n - ji, &ev.field_mode(&yb, m + ji, v));
                                acc.add_scaled(&t, &c1);
                            }
                            // y^{n-j} x^j from (-y+x)^n
                            let c2 = minus.coeff(n - ji, j).ok_or_else(missing)?;
                            if !c2.is_zero() {
                                let t = ev.field_mode(&yb, m + n - ji, &ev.field_mode(&ya, l + ji, v));
                                acc.add_scaled(&t, &-&c2);
                            }
                        }
                        let rhs = acc.finish();
                        let mut acc = StateBuilder::new();
                        for (jn, p) in &products {
                            let i = jn - n;
                            let c = binomial(l, i as u32);
                            if !c.is_zero() {
                                acc.add_scaled(&ev.field_mode(p, l + m - i, v), &Scalar::from(c));
                            }
                        }
                        let lhs = acc.finish();
                        self.check_cell(
                            &mut report,
                            || format!("a={} b={} l={l} m={m} n={n} v={}", self.show(a), self.show(b), self.show(v)),
                            &lhs,
                            &rhs,
                        );
                    }
                }
            }
        }
        Ok(report.finish(start.elapsed()))
    }

    /// `a_n b = Σ_k (-1)^{n+k+1} T^k/k! b_{n+k} a`, the component form of
    /// `Y(a,z) b = e^{zT} Y(b,-z) a`.
    pub fn verify_skew_symmetry(&self, a: &State, b: &State, grid: &VerificationGrid) -> Report {
        let start = Instant::now();
        let mut report = self.report("skew", grid);
        let top = weight(a) + weight(b);
        for n in grid.ns() {
            let lhs = self.state_mode(a, n, b);
            let mut acc = StateBuilder::new();
            for k in 0..(top - n).max(0) {
                let ba = self.state_mode(b, n + k, a);
                if ba.is_zero() {
                    continue;
                }
                let c = Scalar::from(sign(n + k + 1));
                acc.add_scaled(&self.divided_translate(&ba, k as u32), &c);
            }
            let rhs = acc.finish();
            self.check_cell(&mut report, || format!("a={} b={} n={n}", self.show(a), self.show(b)), &lhs, &rhs);
        }
        report.finish(start.elapsed())
    }

    /// `[T, X_n] v = -n X_{n-1} v` for a mode family `X`.
    fn covariance_cells(
        &self,
        report: &mut Report,
        label: &str,
        grid: &VerificationGrid,
        mode: &dyn Fn(i64, &State) -> State,
    ) {
        for v in self.basis(grid.weight_cutoff) {
            let tv = self.translate(&v);
            for n in grid.ns() {
                let lhs = self.translate(&mode(n, &v)).sub(&mode(n, &tv));
                let rhs = mode(n - 1, &v).scale(&Scalar::from(-n));
                self.check_cell(report, || format!("[T, {label}_{n}] on {}", self.show(&v)), &lhs, &rhs);
            }
        }
    }

    /// Translation covariance of `Y(a)`, `Y(Ta) = ∂Y(a)` on the `m` window,
    /// and `a_{-k-1} vac = T^k a / k!` for `k <= exp_orders`.
    pub fn verify_translation(&self, a: &State, grid: &VerificationGrid, exp_orders: u32) -> Report {
        let start = Instant::now();
        let mut report = self.report("translation", grid);
        let ya = self.vertex_operator(a);
        let ev = self.evaluator();
        self.covariance_cells(&mut report, &format!("Y({})", self.show(a)), grid, &|n, v| ev.field_mode(&ya, n, v));
        let yta = self.vertex_operator(&self.translate(a));
        report.absorb(ev.compare_mode_tables("Y(Ta) = dY(a)", &yta, &FieldExpr::derivative(1, &ya), grid.m_range, grid.weight_cutoff));
        let vac = State::vacuum();
        for k in 0..=exp_orders {
            let lhs = ev.field_mode(&ya, -(k as i64) - 1, &vac);
            let rhs = self.divided_translate(a, k);
            self.check_cell(&mut report, || format!("z^{k} of Y({}, z) vac", self.show(a)), &lhs, &rhs);
            let above = ev.field_mode(&ya, k as i64, &vac);
            self.check_cell(&mut report, || format!("mode {k} of Y({}) on vac", self.show(a)), &above, &State::zero());
        }
        report.finish(start.elapsed())
    }

    /// `T(a_n b) = (Ta)_n b + a_n (Tb)` with `(Ta)_n` read both from
    /// `Y(Ta)` and as `-n a_{n-1}`.
    pub fn verify_derivation(&self, a: &State, b: &State, grid: &VerificationGrid) -> Report {
        let start = Instant::now();
        let mut report = self.report("T derivation", grid);
        let ta = self.translate(a);
        let tb = self.translate(b);
        for n in grid.ns() {
            let lhs = self.translate(&self.state_mode(a, n, b));
            let via_y = self.state_mode(&ta, n, b).add(&self.state_mode(a, n, &tb));
            let via_shift = self.state_mode(a, n - 1, b).scale(&Scalar::from(-n)).add(&self.state_mode(a, n, &tb));
            self.check_cell(&mut report, || format!("T(a_{n} b) via Y(Ta), a={} b={}", self.show(a), self.show(b)), &lhs, &via_y);
            self.check_cell(&mut report, || format!("T(a_{n} b) via -n a_{{n-1}}, a={} b={}", self.show(a), self.show(b)), &lhs, &via_shift);
        }
        report.finish(start.elapsed())
    }

    /// `Y(a_n b)` against `Y(a) *n Y(b)` as mode tables.
    pub fn verify_generating_consistency(&self, a: &State, b: &State, grid: &VerificationGrid) -> Report {
        let start = Instant::now();
        let mut report = self.report("generating consistency", grid);
        let (ya, yb) = (self.vertex_operator(a), self.vertex_operator(b));
        for n in grid.ns() {
            let left = self.vertex_operator(&self.state_mode(a, n, b));
            let right = FieldExpr::residue_product(n, &ya, &yb);
            let mut check = self.evaluator().compare_mode_tables("generating consistency", &left, &right, grid.m_range, grid.weight_cutoff);
            for w in &mut check.failures {
                w.context = format!("a={} b={} n={n} {}", self.show(a), self.show(b), w.context);
            }
            report.absorb(check);
        }
        report.finish(start.elapsed())
    }

    /// `Y` is translation covariant on the sample states; creative
    /// candidates `Y(a) + z·g(z)` are not; `Generator g` and the literal
    /// composite `g *-1 I` agree; differences of equal fields kill the grid.
    pub fn verify_uniqueness(&self, grid: &VerificationGrid) -> Report {
        let start = Instant::now();
        let mut report = self.report("uniqueness", grid);
        let ev = self.evaluator();
        let vac = State::vacuum();
        let mut samples = vec![vac.clone()];
        samples.extend(self.generator_states());
        for a in &samples {
            let ya = self.vertex_operator(a);
            self.covariance_cells(&mut report, &format!("Y({})", self.show(a)), grid, &|n, v| ev.field_mode(&ya, n, v));
            for g in self.generators() {
                let cand = ShiftedField::new(&ya).plus(Scalar::one(), g, 1);
                let created = cand.mode(self, -1, &vac);
                let creative = created == *a && (0..=3).all(|n| cand.mode(self, n, &vac).is_zero());
                report.cells_checked += 1;
                if !creative {
                    report.fail(format!("candidate Y({}) + z*{} is not creative", self.show(a), g.display(self.spec())), self.show(&created), self.show(a));
                    continue;
                }
                let mut probe = self.report("probe", grid);
                self.covariance_cells(&mut probe, "candidate", grid, &|n, v| cand.mode(self, n, v));
                report.cells_checked += 1;
                if probe.passed() {
                    report.fail(
                        format!("candidate Y({}) + z*{} is translation covariant on the grid", self.show(a), g.display(self.spec())),
                        "covariant",
                        "expected a covariance failure",
                    );
                }
            }
        }
        for (g, a) in self.generators().iter().zip(self.generator_states()) {
            let composite = self.generating_composite(&a);
            report.absorb(ev.compare_mode_tables("generator vs composite", g, &composite, grid.m_range, grid.weight_cutoff));
        }
        for a in self.basis(grid.weight_cutoff.min(3)) {
            let diff = self.vertex_operator(&a).sub(&self.generating_composite(&a));
            report.absorb(ev.zero_field_check(&diff, grid.m_range, grid.weight_cutoff));
        }
        report.finish(start.elapsed())
    }

    /// `e^{yT} Y(a,x) e^{-yT} = Y(a,x+y)` to order `orders` in `y`:
    /// `ad_T^j Y(a)_m / j! = (-1)^j C(m,j) a_{m-j}`.
    pub fn translation_symmetry_check(&self, a: &State, orders: u32, grid: &VerificationGrid) -> Report {
        let start = Instant::now();
        let mut report = self.report("translation symmetry", grid);
        let ya = self.vertex_operator(a);
        let ev = self.evaluator();
        for v in self.basis(grid.weight_cutoff) {
            let mut powers = vec![v.clone()];
            for _ in 0..orders {
                let next = self.translate(powers.last().unwrap());
                powers.push(next);
            }
            for m in grid.ms() {
                for j in 0..=orders {
                    let mut acc = StateBuilder::new();
                    for i in 0..=j {
                        let mut t = ev.field_mode(&ya, m, &powers[i as usize]);
                        for _ in 0..j - i {
                            t = self.translate(&t);
                        }
                        acc.add_scaled(&t, &Scalar::from(&sign(i as i64) * &binomial(j as i64, i)));
                    }
                    let lhs = acc.finish().scale(&Scalar::from(factorial(j).recip()));
                    let c = &sign(j as i64) * &binomial(m, j);
                    let rhs = ev.field_mode(&ya, m - j as i64, &v).scale(&Scalar::from(c));
                    self.check_cell(&mut report, || format!("y^{j}, m={m}, v={}", self.show(&v)), &lhs, &rhs);
                }
            }
        }
        report.finish(start.elapsed())
    }

    /// Dong measurements `order(F *n G, H)` against `K + L + M - n - 1` for
    /// every generator triple and `n` in `n_range` up to `K-1`.
    pub fn dong_table(&self, n_range: (i64, i64), cfg: &LocalityConfig) -> Vec<(String, DongReport)> {
        let ev = self.evaluator();
        let spec = self.spec();
        let mut out = Vec::new();
        for f in self.generators() {
            for g in self.generators() {
                let k = ev.locality_order(f, g, cfg).order.map_or(n_range.1, |k| k as i64 - 1);
                for h in self.generators() {
                    for n in n_range.0..=n_range.1.min(k) {
                        let label = format!("F={} G={} H={} n={n}", f.display(spec), g.display(spec), h.display(spec));
                        out.push((label, ev.dong_bound_check(f, g, h, n, cfg)));
                    }
                }
            }
        }
        out
    }

    pub fn verify_dong(&self, n_range: (i64, i64), cfg: &LocalityConfig) -> Report {
        let start = Instant::now();
        let grid = VerificationGrid { n_range, m_range: cfg.window, l_range: cfg.window, weight_cutoff: cfg.weight_cutoff };
        let mut report = self.report("dong", &grid);
        for (label, r) in self.dong_table(n_range, cfg) {
            report.cells_checked += 1;
            if !r.holds {
                report.fail(label, format!("measured {:?}", r.measured), format!("bound {}", r.bound));
            }
        }
        report.finish(start.elapsed())
    }

    /// The locality equivalences on every generator pair: the commutator
    /// formula, the alternating commutator sum and polynomiality in `m`;
    /// for the Heisenberg algebra also both delta-series forms.
    pub fn verify_locality_equivalences(&self, grid: &VerificationGrid) -> Report {
        let start = Instant::now();
        let mut report = self.report("locality-equivalences", grid);
        let ev = self.evaluator();
        let cfg = grid.locality_config();
        let heisenberg = matches!(self.spec().kind(), AlgebraKind::Heisenberg);
        for f in self.generators() {
            for g in self.generators() {
                let loc = ev.locality_order(f, g, &cfg);
                let Some(order) = loc.order else {
                    report.fail(format!("{} ~ {}", f.display(self.spec()), g.display(self.spec())), "not local on window", "local");
                    continue;
                };
                report.absorb(ev.commutator_formula_check(f, g, order, grid.m_range, grid.weight_cutoff));
                report.absorb(ev.alternating_commutator_check(f, g, order, grid.m_range, grid.weight_cutoff));
                report.absorb(ev.polynomial_commutator_check(f, g, order, grid.m_range, grid.weight_cutoff));
                if heisenberg {
                    for check in [
                        ev.delta_commutator_check(f, g, order, grid.m_range, grid.weight_cutoff),
                        ev.split_commutator_check(f, g, order, grid.m_range, grid.weight_cutoff),
                    ] {
                        match check {
                            Ok(c) => report.absorb(c),
                            Err(e) => report.fail("delta form", e.to_string(), "exact expansion"),
                        }
                    }
                }
            }
        }
        report.finish(start.elapsed())
    }

    /// Run one identity over all generator pairs (or generator states).
    pub fn run(&self, identity: Identity, grid: &VerificationGrid, dong_n: Option<i64>) -> Report {
        let start = Instant::now();
        let states = self.generator_states();
        let mut report = self.report(identity.name(), grid);
        match identity {
            Identity::Dong => {
                let cfg = grid.locality_config();
                let range = dong_n.map_or(grid.n_range, |n| (n, n));
                return self.verify_dong(range, &cfg);
            }
            Identity::LocalityEquivalences => return self.verify_locality_equivalences(grid),
            Identity::Translation => {
                for a in &states {
                    report.merge(self.verify_translation(a, grid, 4));
                    for b in &states {
                        report.merge(self.verify_derivation(a, b, grid));
                    }
                }
            }
            _ => {
                for a in &states {
                    for b in &states {
                        let part = match identity {
                            Identity::Bflm => self.verify_bflm(a, b, grid),
                            Identity::Commutator => self.verify_commutator(a, b, grid),
                            Identity::Associator => self.verify_associator(a, b, grid),
                            Identity::Skew => self.verify_skew_symmetry(a, b, grid),
                            _ => unreachable!(),
                        };
                        report.merge(part);
                    }
                }
            }
        }
        report.finish(start.elapsed())
    }
}
