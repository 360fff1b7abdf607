use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::liealg::{Mode, Monomial, State, VacuumModule};
use crate::scalars::{Rational, Scalar};

fn evaluator(spec: AlgebraSpec) -> Evaluator {
    Evaluator::new(Arc::new(VacuumModule::new(spec)))
}

fn field(ev: &Evaluator, text: &str) -> FieldExpr {
    FieldExpr::parse(ev.module().spec(), text).unwrap()
}

fn state(ev: &Evaluator, text: &str) -> State {
    ev.module().parse_state(text).unwrap()
}

fn heis() -> Evaluator {
    evaluator(AlgebraSpec::heisenberg())
}

fn vir() -> Evaluator {
    evaluator(AlgebraSpec::virasoro())
}

fn aff() -> Evaluator {
    evaluator(AlgebraSpec::affine_sl2())
}

fn window_cfg(cutoff: u32) -> LocalityConfig {
    LocalityConfig::new((-3, 3), cutoff)
}

#[test]
fn residue_product_on_vacuum() {
    let ev = heis();
    let f = field(&ev, "(h *1 h)");
    assert_eq!(ev.field_mode(&f, -1, &State::vacuum()), State::vacuum());
    // (h *-1 h)_{-1} vac = h_{-1} h_{-1} vac
    let g = field(&ev, ":h h:");
    assert_eq!(ev.field_mode(&g, -1, &State::vacuum()), state(&ev, "h[-1]h[-1]vac"));
}

#[test]
fn identity_modes() {
    let ev = aff();
    let v = state(&ev, "e[-1]f[-2]vac + 3*h[-1]vac");
    let id = FieldExpr::identity();
    assert_eq!(ev.field_mode(&id, -1, &v), v);
    for m in [-3, -2, 0, 1, 2] {
        assert!(ev.field_mode(&id, m, &v).is_zero());
    }
}

#[test]
fn derivative_modes() {
    let ev = heis();
    let h = field(&ev, "h");
    let dh = field(&ev, "dh");
    let spec = ev.module().spec().clone();
    for v in ev.module().basis_states(4) {
        for n in -4..=4 {
            let expected = ev.field_mode(&h, n - 1, &v).scale(&Scalar::from(-n));
            assert_eq!(ev.field_mode(&dh, n, &v), expected, "n={n} v={}", v.display(&spec));
        }
    }
    // ∂² through the same rule twice
    let d2h = field(&ev, "d2h");
    let dd = FieldExpr::derivative(1, &dh);
    assert_eq!(d2h, dd);
}

#[test]
fn expression_normalization() {
    let ev = heis();
    let h = field(&ev, "h");
    assert_eq!(FieldExpr::derivative(0, &h), h);
    assert!(h.sub(&h).is_zero());
    assert_eq!(FieldExpr::linear([(Scalar::one(), h.clone())]), h);
    let nested = FieldExpr::linear([(Scalar::from(2), h.add(&h)), (-Scalar::from(4), h.clone())]);
    assert!(nested.is_zero());
    assert!(FieldExpr::derivative(3, &FieldExpr::zero()).is_zero());
    assert!(FieldExpr::residue_product(1, &FieldExpr::zero(), &h).is_zero());
}

#[test]
fn creativity_examples() {
    let ev = heis();
    let h = field(&ev, "h");
    assert!(ev.creativity_check(&h, &state(&ev, "h[-1]vac"), 6).holds());
    // ∂^(k) h = ∂^k h / k! creates h_{-k-1} vac
    let mut fact = Rational::one();
    for k in 1..=4u32 {
        fact = &fact * &Rational::from_integer(k as i64);
        let f = FieldExpr::derivative(k, &h).scale(&Scalar::from(fact.recip()));
        let expected = state(&ev, &format!("h[{}]vac", -(k as i64) - 1));
        assert!(ev.creativity_check(&f, &expected, 6).holds(), "k={k}");
    }
    // a *n b creates a_n b
    let ev = aff();
    let e = field(&ev, "e");
    let f = field(&ev, "f");
    let fv = state(&ev, "f[-1]vac");
    for n in -3..=2 {
        let expected = ev.field_mode(&e, n, &fv);
        let report = ev.creativity_check(&FieldExpr::residue_product(n, &e, &f), &expected, 5);
        assert!(report.holds(), "n={n}: {report:?}");
    }
    let wrong = ev.creativity_check(&e, &fv, 3);
    assert!(!wrong.holds());
}

#[test]
fn normal_ordered_examples() {
    let ev = heis();
    let h = field(&ev, "h");
    let id = FieldExpr::identity();
    let v = ev.field_mode(&FieldExpr::normal_ordered(0, &h, &id), -1, &State::vacuum());
    assert_eq!(v, state(&ev, "h[-1]vac"));
    let dhh = field(&ev, ":dh h:");
    assert_eq!(ev.field_mode(&dhh, -1, &State::vacuum()), state(&ev, "h[-2]h[-1]vac"));
    assert_eq!(field(&ev, ":h h:"), field(&ev, "(h *-1 h)"));
}

#[test]
fn normal_ordering_matches_direct_split() {
    for ev in [heis(), aff(), vir()] {
        let gens: Vec<FieldExpr> =
            ev.module().spec().generators().map(|g| FieldExpr::generator(ev.module().spec(), g)).collect();
        for a in &gens {
            for b in &gens {
                for k in 0..3 {
                    let r = ev.normal_ordered_check(k, a, b, (-3, 3), 3);
                    assert!(r.holds(), "{}: {:?}", ev.module().spec(), r.failures.first());
                }
            }
        }
    }
    // composite arguments
    let ev = heis();
    let r = ev.normal_ordered_check(1, &field(&ev, ":h h:"), &field(&ev, "dh"), (-2, 2), 3);
    assert!(r.holds(), "{:?}", r.failures.first());
}

#[test]
fn locality_orders() {
    let cases: [(Evaluator, &str, &str, u32); 6] = [
        (heis(), "h", "h", 2),
        (vir(), "omega", "omega", 4),
        (aff(), "e", "e", 0),
        (aff(), "e", "h", 1),
        (aff(), "e", "f", 2),
        (aff(), "h", "h", 2),
    ];
    for (ev, a, b, expected) in cases {
        let r = ev.locality_order(&field(&ev, a), &field(&ev, b), &window_cfg(4));
        assert_eq!(r.order, Some(expected), "{a} {b}");
        assert_eq!(r.status(), "verified on window");
        if expected > 0 {
            let w = r.witness.expect("minimality witness");
            assert_eq!(w.n, expected as i64 - 1);
            assert!(!w.output.is_zero());
        } else {
            assert!(r.witness.is_none());
        }
    }
}

#[test]
fn non_local_is_reported() {
    // the cap is below the true order
    let ev = vir();
    let w = field(&ev, "omega");
    let cfg = LocalityConfig { cap: 2, ..window_cfg(3) };
    let r = ev.locality_order(&w, &w, &cfg);
    assert_eq!(r.order, None);
    assert_eq!(r.status(), "not local on window");
    assert!(r.witness.is_some());
}

fn nonzero_ope(ev: &Evaluator, a: &str, b: &str) -> Vec<(u32, State)> {
    ev.ope_singular_part(&field(ev, a), &field(ev, b), &window_cfg(4))
        .unwrap()
        .into_iter()
        .filter(|t| !t.state.is_zero())
        .map(|t| (t.pole, t.state))
        .collect()
}

#[test]
fn ope_examples() {
    let ev = heis();
    assert_eq!(nonzero_ope(&ev, "h", "h"), vec![(2, State::vacuum())]);

    let ev = vir();
    let expected = vec![
        (4, State::vacuum().scale(&Scalar::c().scale(&Rational::new(1, 2)))),
        (2, state(&ev, "2*L[-2]vac")),
        (1, state(&ev, "L[-3]vac")),
    ];
    assert_eq!(nonzero_ope(&ev, "omega", "omega"), expected);
    let full = ev.ope_singular_part(&field(&ev, "omega"), &field(&ev, "omega"), &window_cfg(4)).unwrap();
    assert_eq!(full.iter().map(|t| t.pole).collect::<Vec<_>>(), vec![4, 3, 2, 1]);
    assert!(full[1].state.is_zero());

    let ev = aff();
    assert_eq!(
        nonzero_ope(&ev, "e", "f"),
        vec![(2, State::vacuum().scale(&Scalar::k())), (1, state(&ev, "h[-1]vac"))]
    );
    assert!(nonzero_ope(&ev, "e", "e").is_empty());
    // [h, e] = 2e
    assert_eq!(nonzero_ope(&ev, "h", "e"), vec![(1, state(&ev, "2*e[-1]vac"))]);
}

#[test]
fn derivative_locality_examples() {
    let ev = heis();
    let r = ev.derivative_locality_check(&field(&ev, "h"), &field(&ev, "h"), &window_cfg(4));
    assert!(r.holds());
    assert_eq!(r.derived.order, Some(3));

    let ev = vir();
    let r = ev.derivative_locality_check(&field(&ev, "omega"), &field(&ev, "omega"), &window_cfg(4));
    assert!(r.holds());
    assert!(r.derived.order.unwrap() <= 5);

    let ev = aff();
    let r = ev.derivative_locality_check(&FieldExpr::identity(), &field(&ev, "e"), &window_cfg(3));
    assert_eq!(r.base.order, Some(0));
    assert_eq!(r.derived.order, Some(0));
    assert!(ev.acts_as_zero(&field(&ev, "d id"), (-3, 3), 3).is_none());
}

#[test]
fn derivation_of_products_examples() {
    let ev = heis();
    let h = field(&ev, "h");
    let r = ev.derivation_of_products_check(&h, &h, -1, (-3, 0), 6);
    assert!(r.holds(), "{:?}", r.failures.first());
    for n in 2..5 {
        let f = FieldExpr::residue_product(n, &h, &h);
        assert!(ev.acts_as_zero(&f, (-3, 3), 4).is_none());
        assert!(ev.derivation_of_products_check(&h, &h, n, (-3, 3), 4).holds());
    }
    let ev = vir();
    let w = field(&ev, "omega");
    let r = ev.derivation_of_products_check(&w, &w, 1, (-3, 3), 4);
    assert!(r.holds(), "{:?}", r.failures.first());
}

#[test]
fn dong_examples() {
    let ev = heis();
    let h = field(&ev, "h");
    let r = ev.dong_bound_check(&h, &h, &h, 1, &window_cfg(4));
    assert_eq!((r.k, r.l, r.m, r.bound, r.measured, r.holds), (2, 2, 2, 4, Some(0), true));
    let r = ev.dong_bound_check(&h, &h, &h, -1, &window_cfg(4));
    assert_eq!((r.bound, r.measured, r.holds), (6, Some(2), true));
    let r = ev.dong_bound_check(&h, &h, &h, 2, &window_cfg(4));
    assert_eq!((r.measured, r.holds), (Some(0), true));
}

#[test]
fn zero_field_criterion() {
    for ev in [heis(), aff(), vir()] {
        let spec = ev.module().spec().clone();
        let g = FieldExpr::generator(&spec, spec.generators().next().unwrap());
        let composite = FieldExpr::residue_product(-2, &g, &FieldExpr::derivative(1, &g));
        // built by hand so that the terms do not collapse structurally
        let zero = FieldExpr::make(
            FieldKind::Linear(vec![(Scalar::one(), composite.clone()), (-Scalar::one(), composite.clone())]),
            composite.weight(),
        );
        assert!(!zero.is_zero());
        let r = ev.zero_field_check(&zero, (-4, 4), 4);
        assert!(r.holds() && r.cells_checked > 0);
        assert!(ev.acts_as_zero(&zero, (-4, 4), 4).is_none());
    }
    // a nonzero field does not pass as zero
    let ev = heis();
    assert!(ev.acts_as_zero(&field(&ev, "dh"), (-2, 2), 2).is_some());
}

#[test]
fn residue_product_sum_is_finite() {
    for ev in [heis(), aff(), vir()] {
        let spec = ev.module().spec().clone();
        let gens: Vec<FieldExpr> = spec.generators().map(|g| FieldExpr::generator(&spec, g)).collect();
        let a = &gens[0];
        let b = gens.last().unwrap();
        for n in -3..=3 {
            let rp = FieldExpr::residue_product(n, a, b);
            for v in ev.module().basis_states(3) {
                for m in -3..=3 {
                    assert_eq!(ev.field_mode(&rp, m, &v), ev.residue_product_padded(n, a, b, m, &v, 5));
                }
            }
        }
    }
}

#[test]
fn lower_truncation_of_creative_states() {
    for ev in [heis(), aff(), vir()] {
        let spec = ev.module().spec().clone();
        let gens: Vec<FieldExpr> = spec.generators().map(|g| FieldExpr::generator(&spec, g)).collect();
        for a in &gens {
            for b in &gens {
                let order = ev.locality_order(a, b, &window_cfg(3)).order.unwrap() as i64;
                let bstate = ev.field_mode(b, -1, &State::vacuum());
                for n in order..=order + 3 {
                    assert!(ev.field_mode(a, n, &bstate).is_zero());
                }
                if order > 0 {
                    assert!(!ev.field_mode(a, order - 1, &bstate).is_zero());
                }
            }
        }
    }
}

#[test]
fn locality_equivalences() {
    for ev in [heis(), aff(), vir()] {
        let spec = ev.module().spec().clone();
        let gens: Vec<FieldExpr> = spec.generators().map(|g| FieldExpr::generator(&spec, g)).collect();
        for a in &gens {
            for b in &gens {
                let order = ev.locality_order(a, b, &window_cfg(3)).order.unwrap();
                let r = ev.commutator_formula_check(a, b, order, (-3, 3), 3);
                assert!(r.holds(), "{spec}: {:?}", r.failures.first());
                let r = ev.alternating_commutator_check(a, b, order, (-3, 3), 3);
                assert!(r.holds(), "{spec}: {:?}", r.failures.first());
                let r = ev.polynomial_commutator_check(a, b, order, (-4, 4), 2);
                assert!(r.holds(), "{spec}: {:?}", r.failures.first());
                if order > 0 {
                    // one order too few breaks the commutator formula
                    assert!(!ev.commutator_formula_check(a, b, order - 1, (-3, 3), 3).holds());
                }
            }
        }
    }
}

#[test]
fn delta_forms_for_heisenberg() {
    let ev = heis();
    let h = field(&ev, "h");
    let r = ev.delta_commutator_check(&h, &h, 2, (-4, 4), 4).unwrap();
    assert!(r.holds(), "{:?}", r.failures.first());
    let r = ev.split_commutator_check(&h, &h, 2, (-4, 4), 4).unwrap();
    assert!(r.holds(), "{:?}", r.failures.first());
    assert!(r.cells_checked > 0);
    assert!(!ev.split_commutator_check(&h, &h, 1, (-4, 4), 2).unwrap().holds());
}

#[test]
fn parse_and_display() {
    let ev = vir();
    let spec = ev.module().spec().clone();
    for text in ["omega", "d2omega", "(omega *1 omega)", "(omega *-1 omega)", "2*omega - d(omega *0 omega)", "id"] {
        let f = FieldExpr::parse(&spec, text).unwrap();
        let shown = f.display(&spec).to_string();
        assert_eq!(FieldExpr::parse(&spec, &shown).unwrap(), f, "{text} -> {shown}");
    }
    assert_eq!(field(&ev, ":omega omega:").display(&spec).to_string(), "(omega *-1 omega)");
    assert_eq!(field(&ev, "1/2*omega").display(&spec).to_string(), "1/2*omega");
    let err = FieldExpr::parse(&spec, "omega + h").unwrap_err();
    assert_eq!(err.position, 8);
    assert!(err.message.contains("unknown generator"));
    assert!(FieldExpr::parse(&spec, "(omega *1 omega").is_err());
    assert!(FieldExpr::parse(&spec, "omega *x omega").is_err());
    assert_eq!(FieldExpr::parse(&spec, "omega omega").unwrap_err().position, 6);
}

#[test]
fn virasoro_field_index_shift() {
    let ev = vir();
    let w = field(&ev, "omega");
    let v = state(&ev, "L[-2]vac");
    // ω_k = L_{k-1}
    for k in -3..=4 {
        assert_eq!(ev.field_mode(&w, k, &v), ev.module().mode_act(crate::liealg::Gen(0), k - 1, &v));
    }
    // grading: ω_k kills weight-w states once k >= w + 2
    assert!(ev.field_mode(&w, 4, &v).is_zero());
    assert!(!ev.field_mode(&w, 3, &v).is_zero());
    assert_eq!(ev.grading_bound(&w, &v), 4);
}

#[test]
fn caching_is_transparent() {
    let ev = aff();
    let f = field(&ev, "(e *-2 (f *0 h))");
    let v = state(&ev, "e[-1]f[-1]vac");
    let first = ev.field_mode(&f, -1, &v);
    assert!(ev.cache_len() > 0);
    let fresh = aff();
    assert_eq!(fresh.field_mode(&f, -1, &v), first);
    assert_eq!(ev.field_mode(&f, -1, &v), first);
}

fn small_field(spec: AlgebraSpec) -> impl Strategy<Value = FieldExpr> {
    let leaves: Vec<FieldExpr> = spec
        .generators()
        .map(|g| FieldExpr::generator(&spec, g))
        .chain([FieldExpr::identity()])
        .collect();
    let leaf = proptest::sample::select(leaves);
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (0u32..3, inner.clone()).prop_map(|(k, f)| FieldExpr::derivative(k, &f)),
            (-2i64..3, inner.clone(), inner.clone()).prop_map(|(n, a, b)| FieldExpr::residue_product(n, &a, &b)),
            (-3i64..4, inner.clone(), inner).prop_map(|(c, a, b)| a.scale(&Scalar::from(c)).add(&b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn field_modes_are_linear(f in small_field(AlgebraSpec::heisenberg()), g in small_field(AlgebraSpec::heisenberg()), c in -4i64..5, m in -3i64..3) {
        let ev = heis();
        let combo = f.scale(&Scalar::from(c)).add(&g);
        for v in ev.module().basis_states(2) {
            let expected = ev.field_mode(&f, m, &v).scale(&Scalar::from(c)).add(&ev.field_mode(&g, m, &v));
            prop_assert_eq!(ev.field_mode(&combo, m, &v), expected);
        }
    }

    #[test]
    fn display_round_trips(f in small_field(AlgebraSpec::affine_sl2())) {
        let spec = AlgebraSpec::affine_sl2();
        let shown = f.display(&spec).to_string();
        prop_assert_eq!(FieldExpr::parse(&spec, &shown).unwrap(), f);
    }

    #[test]
    fn translation_acts_as_derivative(f in small_field(AlgebraSpec::heisenberg()), m in -3i64..3) {
        // [T, F_m] = -m F_{m-1}, the translation covariance of every field built here
        let ev = heis();
        for v in ev.module().basis_states(2) {
            let tf = ev.module().translate(&ev.field_mode(&f, m, &v));
            let ft = ev.field_mode(&f, m, &ev.module().translate(&v));
            let expected = ev.field_mode(&f, m - 1, &v).scale(&Scalar::from(-m));
            prop_assert_eq!(tf.sub(&ft), expected);
        }
    }
}

#[test]
fn witness_monomials_are_canonical() {
    let ev = heis();
    let r = ev.locality_order(&field(&ev, "h"), &field(&ev, "h"), &window_cfg(3));
    let w = r.witness.unwrap();
    for (mono, _) in w.output.terms() {
        let m: &Monomial = mono;
        assert!(m.windows(2).all(|p| p[0] <= p[1]));
        assert!(m.iter().all(|x: &Mode| x.n < 0));
    }
}
