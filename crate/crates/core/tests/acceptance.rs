//! Acceptance suite: one PASS/FAIL line per criterion, exact equality only.

use std::process::ExitCode;
use std::time::Instant;

use newtonva::fields::{FieldExpr, LocalityConfig, OpeTerm};
use newtonva::formal::{delta_series, integration_by_parts_holds, residue_kernel_check, taylor_expand, LaurentPoly, Var};
use newtonva::liealg::{AlgebraSpec, State};
use newtonva::newton::{kernel_order, newton_coefficients, nth_forward_difference, PolySequence, SequenceWindow};
use newtonva::scalars::{Rational, Scalar};
use newtonva::vertex::{Identity, Report, VerificationGrid, VertexAlgebraHandle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn report_ok(r: &Report) -> Result<usize, String> {
    if r.passed() && r.cells_checked > 0 {
        Ok(r.cells_checked)
    } else {
        Err(format!("{} on {}: {}", r.identity, r.algebra, r.failures.first().map_or("no cells".into(), |w| format!("{}: {} != {}", w.context, w.lhs, w.rhs))))
    }
}

fn handles() -> [VertexAlgebraHandle; 3] {
    [
        VertexAlgebraHandle::new(AlgebraSpec::heisenberg()),
        VertexAlgebraHandle::new(AlgebraSpec::affine_sl2()),
        VertexAlgebraHandle::new(AlgebraSpec::virasoro()),
    ]
}

fn state(h: &VertexAlgebraHandle, text: &str) -> State {
    h.module().parse_state(text).expect("state parses")
}

fn field(h: &VertexAlgebraHandle, text: &str) -> FieldExpr {
    FieldExpr::parse(h.spec(), text).expect("field parses")
}

fn constant(s: Scalar) -> FieldExpr {
    FieldExpr::identity().scale(&s)
}

/// Mode table of `f` equals that of `expected` over `[-4, 4]`.
fn same_field(h: &VertexAlgebraHandle, name: &str, f: &FieldExpr, expected: &FieldExpr, cutoff: u32) -> Result<(), String> {
    let r = h.evaluator().compare_mode_tables(name, f, expected, (-4, 4), cutoff);
    ensure(r.holds(), || format!("{name}: {:?}", r.failures.first()))
}

fn creates(h: &VertexAlgebraHandle, name: &str, f: &FieldExpr, a: &State) -> Result<(), String> {
    let r = h.evaluator().creativity_check(f, a, 4);
    ensure(r.holds(), || format!("{name} creates {} not {}", r.created.display(h.spec()), a.display(h.spec())))
}

fn order_is(h: &VertexAlgebraHandle, f: &FieldExpr, g: &FieldExpr, cfg: &LocalityConfig, expected: u32) -> Result<(), String> {
    let r = h.evaluator().locality_order(f, g, cfg);
    ensure(r.order == Some(expected), || format!("order {:?}, expected {expected}", r.order))?;
    if expected > 0 {
        let w = r.witness.as_ref().ok_or("missing witness")?;
        ensure(w.n == expected as i64 - 1 && !w.output.is_zero(), || format!("witness at n={}", w.n))?;
    }
    Ok(())
}

fn ope_is(h: &VertexAlgebraHandle, f: &FieldExpr, g: &FieldExpr, cfg: &LocalityConfig, expected: &[(u32, &str)]) -> Result<(), String> {
    let terms = h.evaluator().ope_singular_part(f, g, cfg).map_err(|r| r.status().to_string())?;
    let want: Vec<OpeTerm> = expected.iter().map(|(pole, s)| OpeTerm { pole: *pole, state: state(h, s) }).collect();
    ensure(terms == want, || format!("OPE {:?}", terms.iter().map(|t| (t.pole, t.state.display(h.spec()).to_string())).collect::<Vec<_>>()))
}

fn heisenberg_ope() -> Outcome {
    let h = VertexAlgebraHandle::new(AlgebraSpec::heisenberg());
    let g = field(&h, "h");
    let cfg = LocalityConfig::new((-3, 3), 8);
    order_is(&h, &g, &g, &cfg, 2)?;
    let p0 = FieldExpr::residue_product(0, &g, &g);
    let hit = h.evaluator().acts_as_zero(&p0, (-4, 4), 8);
    ensure(hit.is_none(), || format!("h *0 h nonzero at m={}", hit.as_ref().unwrap().0))?;
    same_field(&h, "h *1 h", &FieldExpr::residue_product(1, &g, &g), &constant(Scalar::one()), 8)?;
    ope_is(&h, &g, &g, &cfg, &[(2, "vac"), (1, "0")])?;
    Ok("order 2, witness n=1, h*1h = Id on weight <= 8".into())
}

fn virasoro_ope() -> Outcome {
    let h = VertexAlgebraHandle::new(AlgebraSpec::virasoro());
    let w = field(&h, "omega");
    let p = |n| FieldExpr::residue_product(n, &w, &w);
    same_field(&h, "w *3 w", &p(3), &constant(Scalar::c().scale(&Rational::new(1, 2))), 8)?;
    same_field(&h, "w *2 w", &p(2), &FieldExpr::zero(), 8)?;
    creates(&h, "w *1 w", &p(1), &state(&h, "2*L[-2]vac"))?;
    let dw = h.translate(&state(&h, "L[-2]vac"));
    ensure(dw == state(&h, "L[-3]vac"), || "T omega".into())?;
    creates(&h, "w *0 w", &p(0), &dw)?;
    let cfg = LocalityConfig::new((-3, 3), 8);
    order_is(&h, &w, &w, &cfg, 4)?;
    ope_is(&h, &w, &w, &cfg, &[(4, "(C/2)*vac"), (3, "0"), (2, "2*L[-2]vac"), (1, "L[-3]vac")])?;
    Ok("(C/2)/(x-y)^4 + 2L[-2]vac/(x-y)^2 + L[-3]vac/(x-y), order 4 on weight <= 8".into())
}

fn affine_trichotomy() -> Outcome {
    let h = VertexAlgebraHandle::new(AlgebraSpec::affine_sl2());
    let (e, f, hh) = (field(&h, "e"), field(&h, "f"), field(&h, "h"));
    let cfg = LocalityConfig::new((-3, 3), 6);
    order_is(&h, &e, &f, &cfg, 2)?;
    order_is(&h, &e, &hh, &cfg, 1)?;
    order_is(&h, &e, &e, &cfg, 0)?;
    same_field(&h, "e *1 f", &FieldExpr::residue_product(1, &e, &f), &constant(Scalar::k()), 6)?;
    creates(&h, "e *0 f", &FieldExpr::residue_product(0, &e, &f), &state(&h, "h[-1]vac"))?;
    ope_is(&h, &e, &f, &cfg, &[(2, "K*vac"), (1, "h[-1]vac")])?;
    Ok("orders (e,f)=2 (e,h)=1 (e,e)=0, e~f = K/(x-y)^2 + h/(x-y)".into())
}

fn commutator_reconstruction() -> Outcome {
    let grid = VerificationGrid::new((0, 0), (-5, 5), (-5, 5), 6).unwrap();
    let mut cells = 0;
    for h in handles() {
        cells += report_ok(&h.verify_commutator_relations(&grid))?;
    }
    Ok(format!("{cells} cells, |m|,|n| <= 5, weight <= 6"))
}

fn bflm() -> Outcome {
    let grid = VerificationGrid::default();
    let mut cells = 0;
    for h in handles() {
        cells += report_ok(&h.run(Identity::Bflm, &grid, None))?;
    }
    Ok(format!("{cells} cells, l,m,n in [-3,3], weight <= 6"))
}

fn skew() -> Outcome {
    let grid = VerificationGrid::new((0, 0), (0, 0), (-3, 3), 4).unwrap();
    let mut cells = 0;
    for h in handles() {
        let basis = h.basis(4);
        for a in &basis {
            for b in &basis {
                cells += report_ok(&h.verify_skew_symmetry(a, b, &grid))?;
            }
        }
    }
    Ok(format!("{cells} cells, all basis pairs of weight <= 4, n in [-3,3]"))
}

fn translation() -> Outcome {
    let grid = VerificationGrid::new((0, 0), (-4, 4), (-4, 4), 6).unwrap();
    let mut cells = 0;
    for h in handles() {
        for a in h.generator_states() {
            cells += report_ok(&h.verify_translation(&a, &grid, 4))?;
        }
    }
    Ok(format!("{cells} cells, covariance, Y(Ta) = dY(a), e^(zT) to order 4"))
}

fn generating_consistency() -> Outcome {
    let grid = VerificationGrid::new((0, 0), (-4, 4), (-2, 2), 6).unwrap();
    let mut cells = 0;
    for h in handles() {
        let states = h.generator_states();
        for a in &states {
            for b in &states {
                cells += report_ok(&h.verify_generating_consistency(a, b, &grid))?;
            }
        }
    }
    Ok(format!("{cells} cells, n in [-2,2], m in [-4,4], weight <= 6"))
}

fn dong() -> Outcome {
    let cfg = LocalityConfig::new((-3, 3), 4);
    let mut cells = 0;
    for h in handles() {
        cells += report_ok(&h.verify_dong((-2, cfg.cap as i64), &cfg))?;
    }
    Ok(format!("{cells} triples, n in [-2, K-1]"))
}

fn newton_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..100 {
        let degree = rng.gen_range(0..=5usize);
        let coeffs: Vec<Scalar> =
            (0..=degree).map(|_| Scalar::from(Rational::new(rng.gen_range(-20..=20), rng.gen_range(1..=6)))).collect();
        let p = PolySequence::new(coeffs);
        let w = p.window(0, 10);
        let back = newton_coefficients(&w, 6).map_err(|e| format!("case {case}: {e}"))?;
        ensure(back == p, || format!("case {case}: round trip {:?}", back.coeffs()))?;
        ensure((-15..=15).all(|n| back.evaluate(n) == p.evaluate(n)), || format!("case {case}: evaluation"))?;
        ensure(kernel_order(&w).order() == Some(p.kernel_order()), || format!("case {case}: kernel order"))?;
        let raw = SequenceWindow::sample(rng.gen_range(-10..=10), 12, |_| Scalar::from(rng.gen_range(-50..=50i64)));
        for order in 0..=8 {
            nth_forward_difference(&raw, order).map_err(|e| format!("case {case}: {e}"))?;
        }
    }
    let sq = SequenceWindow::sample(0, 8, |n| Scalar::from(n * n));
    let p = newton_coefficients(&sq, 3).map_err(|e| e.to_string())?;
    ensure(p.coeffs() == [Scalar::zero(), Scalar::one(), Scalar::from(2)], || format!("n^2 coefficients {:?}", p.coeffs()))?;
    ensure(p.evaluate(-3) == Scalar::from(9), || format!("n^2 at -3 = {}", p.evaluate(-3)))?;
    Ok("100 random round trips, alternating sums agree, n^2 at -3 = 9".into())
}

fn random_poly(rng: &mut ChaCha8Rng) -> LaurentPoly {
    let n = rng.gen_range(0..6);
    LaurentPoly::from_terms(Var::Z, (0..n).map(|_| (rng.gen_range(-6..=6i64), Scalar::from(rng.gen_range(-5..=5i64)))))
}

fn formal_suite() -> Outcome {
    let zm1 = LaurentPoly::z_minus_one_pow(Var::Z, 1);
    for i in 0..=5u32 {
        let lhs = delta_series(i, -12, 12).and_then(|d| d.mul_laurent(&zm1)).map_err(|e| e.to_string())?;
        let ok = if i == 0 {
            (lhs.floor()..=lhs.ceiling()).all(|e| lhs.coeff(e).is_ok_and(|c| c.is_zero()))
        } else {
            lhs.agrees_with(&delta_series(i - 1, -12, 12).unwrap())
        };
        ensure(ok, || format!("(z-1) delta^({i})"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..100 {
        let f = random_poly(&mut rng);
        for k in 0..=3 {
            residue_kernel_check(&f, k, 12).map_err(|e| format!("case {case}: {e}"))?;
        }
        taylor_expand(&f, 4).map_err(|e| format!("case {case}: {e}"))?;
        ensure(f.derivative().residue().is_zero(), || format!("case {case}: Res df != 0"))?;
        let constant_part = LaurentPoly::monomial(Var::Z, 0, f.coeff(0));
        let nonconstant = &f - &constant_part;
        ensure(nonconstant.is_zero() == nonconstant.derivative().is_zero(), || format!("case {case}: kernel of d"))?;
        for k in -3..=3 {
            ensure(integration_by_parts_holds(&f, k), || format!("case {case}: parts at k={k}"))?;
        }
    }
    Ok("delta lowering i <= 5, residue kernels k <= 3, Taylor to order 4, parts and FTC on 100 inputs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("heisenberg locality and OPE", heisenberg_ope),
        ("virasoro OPE", virasoro_ope),
        ("affine sl2 locality trichotomy", affine_trichotomy),
        ("commutator reconstruction", commutator_reconstruction),
        ("BFLM identity", bflm),
        ("skew-symmetry", skew),
        ("translation suite", translation),
        ("generating-theorem consistency", generating_consistency),
        ("Dong bound", dong),
        ("Newton suite", newton_suite),
        ("formal-calculus suite", formal_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
