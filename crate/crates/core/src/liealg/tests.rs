use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::scalars::{Rational, Scalar};

fn mono(spec: &AlgebraSpec, factors: &[(&str, i32)]) -> Monomial {
    factors.iter().map(|&(l, n)| Mode::new(spec.gen_by_label(l).unwrap(), n)).collect()
}

fn st(module: &VacuumModule, factors: &[(&str, i32)]) -> State {
    State::from_monomial(mono(module.spec(), factors))
}

fn modules() -> Vec<VacuumModule> {
    [AlgebraSpec::heisenberg(), AlgebraSpec::affine_sl2(), AlgebraSpec::virasoro()]
        .into_iter()
        .map(VacuumModule::new)
        .collect()
}

#[test]
fn sl2_passes_construction_checks() {
    let g = FiniteLieAlgebra::sl2();
    assert_eq!(g.dim(), 3);
    assert_eq!(*g.form(0, 1), Rational::one());
    assert_eq!(*g.form(2, 2), Rational::from_integer(2));
    let ef: Vec<_> = g.bracket(0, 1).map(|(d, c)| (d, c.clone())).collect();
    assert_eq!(ef, vec![(2, Rational::one())]);
}

#[test]
fn invalid_tables_are_rejected() {
    let z = Rational::zero;
    let labels = ["a", "b"].map(String::from).to_vec();
    let mut s = vec![vec![vec![z(); 2]; 2]; 2];
    s[0][1][0] = Rational::one();
    let form = vec![vec![z(); 2]; 2];
    assert!(matches!(
        FiniteLieAlgebra::new("bad", labels.clone(), s.clone(), form.clone()),
        Err(LieError::Antisymmetry(..))
    ));
    s[1][0][0] = -Rational::one();
    let mut bad_form = form.clone();
    bad_form[0][0] = Rational::one();
    // [a,b] = a with <a,a> = 1: <[b,a],a> = -1 but <b,[a,a]> = 0
    assert!(matches!(
        FiniteLieAlgebra::new("bad", labels.clone(), s.clone(), bad_form),
        Err(LieError::FormNotInvariant(..))
    ));
    assert!(FiniteLieAlgebra::new("ok", labels, s, form).is_ok());
}

#[test]
fn mode_act_examples() {
    let heis = VacuumModule::new(AlgebraSpec::heisenberg());
    let h = Gen(0);
    assert_eq!(heis.mode_act(h, 1, &st(&heis, &[("h", -1)])), State::vacuum());

    let vir = VacuumModule::new(AlgebraSpec::virasoro());
    let l = Gen(0);
    let got = vir.mode_act(l, 2, &st(&vir, &[("L", -2)]));
    assert_eq!(got, State::monomial_with(Monomial::new(), Scalar::c().scale(&Rational::new(1, 2))));

    let aff = VacuumModule::new(AlgebraSpec::affine_sl2());
    let (e, f) = (Gen(0), Gen(1));
    assert_eq!(aff.mode_act(e, 1, &st(&aff, &[("f", -1)])), State::monomial_with(Monomial::new(), Scalar::k()));
    assert!(aff.mode_act(e, 0, &State::vacuum()).is_zero());
    let _ = f;
}

#[test]
fn virasoro_drops_l_minus_one_on_vacuum() {
    let vir = VacuumModule::new(AlgebraSpec::virasoro());
    assert!(vir.mode_act(Gen(0), -1, &State::vacuum()).is_zero());
    assert!(vir.mode_act(Gen(0), 0, &State::vacuum()).is_zero());
    // L_{-1} L_{-2} vac = [L_{-1}, L_{-2}] vac = L_{-3} vac
    assert_eq!(vir.mode_act(Gen(0), -1, &st(&vir, &[("L", -2)])), st(&vir, &[("L", -3)]));
}

#[test]
fn weights() {
    let heis = VacuumModule::new(AlgebraSpec::heisenberg());
    assert_eq!(st(&heis, &[("h", -2), ("h", -1)]).weight(), StateWeight::Homogeneous(3));
    assert_eq!(State::vacuum().weight(), StateWeight::Homogeneous(0));
    let vir = VacuumModule::new(AlgebraSpec::virasoro());
    assert_eq!(st(&vir, &[("L", -2)]).weight(), StateWeight::Homogeneous(2));
    let mixed = st(&heis, &[("h", -1)]).add(&State::vacuum());
    assert_eq!(mixed.weight(), StateWeight::Inhomogeneous);
    assert_eq!(State::zero().weight(), StateWeight::Zero);
}

#[test]
fn truncation_bound_examples() {
    let heis = VacuumModule::new(AlgebraSpec::heisenberg());
    let v = st(&heis, &[("h", -3)]);
    assert_eq!(heis.truncation_bound(Gen(0), &v), 4);
    assert_eq!(heis.field_act(Gen(0), 3, &v), State::monomial_with(Monomial::new(), Scalar::from(3)));
    assert_eq!(heis.truncation_bound(Gen(0), &State::vacuum()), 0);
    let vir = VacuumModule::new(AlgebraSpec::virasoro());
    assert_eq!(vir.truncation_bound(Gen(0), &State::vacuum()), 0);
}

#[test]
fn translation_examples() {
    let heis = VacuumModule::new(AlgebraSpec::heisenberg());
    assert_eq!(heis.translate(&st(&heis, &[("h", -1)])), st(&heis, &[("h", -2)]));
    assert!(heis.translate(&State::vacuum()).is_zero());
    let vir = VacuumModule::new(AlgebraSpec::virasoro());
    assert_eq!(vir.translate(&st(&vir, &[("L", -2)])), st(&vir, &[("L", -3)]));
}

#[test]
fn translation_matches_explicit_operators() {
    // Heisenberg: T = sum_{n >= 0} h_{-n-1} h_n
    let heis = VacuumModule::new(AlgebraSpec::heisenberg());
    for v in heis.basis_states(6) {
        let mut acc = State::zero();
        for n in 0..=7 {
            acc = acc.add(&heis.mode_act(Gen(0), -n - 1, &heis.mode_act(Gen(0), n, &v)));
        }
        assert_eq!(heis.translate(&v), acc);
    }
    // Virasoro: T = L_{-1}
    let vir = VacuumModule::new(AlgebraSpec::virasoro());
    for v in vir.basis_states(6) {
        assert_eq!(vir.translate(&v), vir.mode_act(Gen(0), -1, &v));
    }
}

#[test]
fn basis_examples() {
    let heis = VacuumModule::new(AlgebraSpec::heisenberg());
    let spec = heis.spec().clone();
    assert_eq!(
        heis.enumerate_basis(2),
        vec![Monomial::new(), mono(&spec, &[("h", -1)]), mono(&spec, &[("h", -2)]), mono(&spec, &[("h", -1), ("h", -1)])]
    );
    let vir = VacuumModule::new(AlgebraSpec::virasoro());
    let vspec = vir.spec().clone();
    assert_eq!(vir.enumerate_basis(3), vec![Monomial::new(), mono(&vspec, &[("L", -2)]), mono(&vspec, &[("L", -3)])]);
    for m in modules() {
        assert_eq!(m.enumerate_basis(0), vec![Monomial::new()]);
    }
}

#[test]
fn basis_sizes_match_partition_counts() {
    // coloured partition counts computed from the product formula
    fn counts(colours: usize, min_part: usize, top: usize) -> Vec<u64> {
        let mut c = vec![0u64; top + 1];
        c[0] = 1;
        for part in min_part..=top {
            for _ in 0..colours {
                for w in part..=top {
                    c[w] += c[w - part];
                }
            }
        }
        c
    }
    let expect = |colours, min_part| counts(colours, min_part, 6).iter().sum::<u64>() as usize;
    let by_alg = [(AlgebraSpec::heisenberg(), 1, 1), (AlgebraSpec::affine_sl2(), 3, 1), (AlgebraSpec::virasoro(), 1, 2)];
    for (spec, colours, min_part) in by_alg {
        let m = VacuumModule::new(spec);
        assert_eq!(m.enumerate_basis(6).len(), expect(colours, min_part));
    }
}

// Independent Fock-space model: h_{-k} multiplies by x_k, h_k = k d/dx_k.
fn fock_act(n: i32, v: &BTreeMap<Vec<u32>, i64>) -> BTreeMap<Vec<u32>, i64> {
    let mut out = BTreeMap::new();
    for (exps, c) in v {
        let mut e = exps.clone();
        let k = n.unsigned_abs() as usize;
        if e.len() <= k {
            e.resize(k + 1, 0);
        }
        let (key, coeff) = match n.cmp(&0) {
            std::cmp::Ordering::Less => {
                e[k] += 1;
                (e, *c)
            }
            std::cmp::Ordering::Equal => continue,
            std::cmp::Ordering::Greater => {
                if e[k] == 0 {
                    continue;
                }
                let a = e[k] as i64;
                e[k] -= 1;
                (e, c * a * n as i64)
            }
        };
        let mut key = key;
        while key.last() == Some(&0) {
            key.pop();
        }
        *out.entry(key).or_insert(0) += coeff;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn to_fock(v: &State) -> BTreeMap<Vec<u32>, i64> {
    let mut out = BTreeMap::new();
    for (m, c) in v.terms() {
        let mut e = Vec::new();
        for x in m {
            let k = (-x.n) as usize;
            if e.len() <= k {
                e.resize(k + 1, 0);
            }
            e[k] += 1;
        }
        let c = c.as_rational().unwrap().to_i64().unwrap();
        *out.entry(e).or_insert(0) += c;
    }
    out
}

#[test]
fn heisenberg_agrees_with_fock_model() {
    let heis = VacuumModule::new(AlgebraSpec::heisenberg());
    for v in heis.basis_states(6) {
        for n in -4..=4 {
            let got = heis.mode_act(Gen(0), n as i64, &v);
            assert_eq!(to_fock(&got), fock_act(n, &to_fock(&v)), "h_{n} on {v:?}");
        }
    }
}

#[test]
fn rewrite_is_confluent() {
    // [g_m, h_n] acting on v must match the defining bracket
    for module in modules() {
        let spec = module.spec().clone();
        let basis = module.basis_states(6);
        for g in spec.generators() {
            for h in spec.generators() {
                for m in -4..=4 {
                    for n in -4..=4 {
                        let br = spec.bracket(Mode::new(g, m), Mode::new(h, n));
                        for v in &basis {
                            let lhs = module
                                .mode_act(g, m as i64, &module.mode_act(h, n as i64, v))
                                .sub(&module.mode_act(h, n as i64, &module.mode_act(g, m as i64, v)));
                            let mut rhs = v.scale(&br.central);
                            for (c, y) in &br.modes {
                                rhs = rhs.add(&module.mode_act(y.gen, y.n as i64, v).scale(c));
                            }
                            assert_eq!(lhs, rhs, "{} [{}, {}] on {:?}", spec, spec.display_mode(Mode::new(g, m)), spec.display_mode(Mode::new(h, n)), v);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn weight_bookkeeping_and_truncation() {
    for module in modules() {
        let spec = module.spec().clone();
        for v in module.basis_states(6) {
            let StateWeight::Homogeneous(w) = v.weight() else { unreachable!() };
            for g in spec.generators() {
                for n in -4..=4i64 {
                    let out = module.mode_act(g, n, &v);
                    if !out.is_zero() {
                        assert_eq!(out.weight(), StateWeight::Homogeneous(w - n));
                    }
                }
                let bound = module.truncation_bound(g, &v);
                assert!(bound <= module.grading_bound(g, &v));
                for k in bound..bound + 4 {
                    assert!(module.field_act(g, k, &v).is_zero());
                }
                assert!(!module.field_act(g, bound - 1, &v).is_zero());
            }
        }
    }
}

#[test]
fn translation_covariance_of_modes() {
    for module in modules() {
        let spec = module.spec().clone();
        for v in module.basis_states(6) {
            let StateWeight::Homogeneous(w) = v.weight() else { unreachable!() };
            let tv = module.translate(&v);
            if !tv.is_zero() {
                assert_eq!(tv.weight(), StateWeight::Homogeneous(w + 1));
            }
            for g in spec.generators() {
                for k in -4..=4i64 {
                    let lhs = module.translate(&module.field_act(g, k, &v)).sub(&module.field_act(g, k, &tv));
                    let rhs = module.field_act(g, k - 1, &v).scale(&Scalar::from(-k));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn parse_states() {
    let heis = VacuumModule::new(AlgebraSpec::heisenberg());
    let v = heis.parse_state("h[-1]h[-2]vac").unwrap();
    assert_eq!(v, st(&heis, &[("h", -2), ("h", -1)]));
    let w = heis.parse_state("2*h[-1]vac - 1/3*h[-2]vac").unwrap();
    assert_eq!(w.coeff(&mono(heis.spec(), &[("h", -2)])), Scalar::ratio(-1, 3));
    assert_eq!(w.display(heis.spec()).to_string(), "-1/3*h[-2]vac + 2*h[-1]vac");
    assert_eq!(heis.parse_state("h[1]h[-1]vac").unwrap(), State::vacuum());
    assert!(heis.parse_state("x[-1]vac").is_err());
    assert!(heis.parse_state("h[-1]").is_err());

    let vir = VacuumModule::new(AlgebraSpec::virasoro());
    // L_{-2} L_{-3} = L_{-3} L_{-2} + L_{-5}
    let expect = st(&vir, &[("L", -3), ("L", -2)]).add(&st(&vir, &[("L", -5)]));
    assert_eq!(vir.parse_state("L[-2]L[-3]vac").unwrap(), expect);
    let aff = VacuumModule::new(AlgebraSpec::affine_sl2());
    let s = aff.parse_state("e[-1]f[-2]vac").unwrap();
    // e_{-1} f_{-2} = f_{-2} e_{-1} + h_{-3}
    assert_eq!(s, st(&aff, &[("f", -2), ("e", -1)]).add(&st(&aff, &[("h", -3)])));
    let k = aff.parse_state("(1/2)*K*vac").unwrap();
    assert_eq!(k, State::monomial_with(Monomial::new(), Scalar::k().scale(&Rational::new(1, 2))));
}

#[test]
fn algebra_config() {
    assert_eq!(AlgebraSpec::from_json(r#"{"algebra":"virasoro"}"#).unwrap(), AlgebraSpec::virasoro());
    assert_eq!(AlgebraSpec::from_json(r#"{"algebra":"affine","lie":"sl2"}"#).unwrap(), AlgebraSpec::affine_sl2());
    assert!(matches!(AlgebraSpec::from_json(r#"{"algebra":"e8"}"#), Err(ConfigError::UnknownAlgebra(_))));
    assert!(matches!(AlgebraSpec::from_json(r#"{"algebra":"affine","lie":"g2"}"#), Err(ConfigError::UnknownLie(_))));
    let cfg = AlgebraSpec::affine_sl2().config();
    assert_eq!(AlgebraSpec::from_config(&cfg).unwrap(), AlgebraSpec::affine_sl2());
}

#[test]
fn bracket_display() {
    let vir = AlgebraSpec::virasoro();
    let b = vir.bracket(Mode::new(Gen(0), 2), Mode::new(Gen(0), -2));
    assert_eq!(vir.display_bracket(&b), "4*L[0] + (1/2)*C");
    let heis = AlgebraSpec::heisenberg();
    assert_eq!(heis.display_bracket(&heis.bracket(Mode::new(Gen(0), 3), Mode::new(Gen(0), -3))), "3");
    let aff = AlgebraSpec::affine_sl2();
    assert_eq!(aff.display_bracket(&aff.bracket(Mode::new(Gen(0), 0), Mode::new(Gen(1), 0))), "h[0]");
}

proptest! {
    #[test]
    fn random_states_are_linear(
        coeffs in prop::collection::vec(-5i64..=5, 12),
        g in 0u8..3,
        n in -4i64..=4,
    ) {
        let aff = VacuumModule::new(AlgebraSpec::affine_sl2());
        let basis = aff.basis_states(2);
        let mut v = State::zero();
        for (b, c) in basis.iter().zip(&coeffs) {
            v = v.add(&b.scale(&Scalar::from(*c)));
        }
        let mut expect = State::zero();
        for (b, c) in basis.iter().zip(&coeffs) {
            expect = expect.add(&aff.mode_act(Gen(g), n, b).scale(&Scalar::from(*c)));
        }
        prop_assert_eq!(aff.mode_act(Gen(g), n, &v), expect);
    }
}
