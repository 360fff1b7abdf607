use newtonva::fields::{FieldExpr, OpeTerm};
use newtonva::liealg::{AlgebraSpec, Gen, Mode, State};
use newtonva::newton::{forward_difference, kernel_order, newton_coefficients, KernelOrder, SequenceWindow};
use newtonva::scalars::{Degree, Rational, Scalar};
use newtonva::vertex::{Identity, VertexAlgebraHandle};
use serde_json::{json, Value};

use crate::config::{parse_range, Format, RunConfig, UsageError};
use crate::sequence::Sequence;

/// Rendered output and the process exit status.
pub struct Outcome {
    pub text: String,
    pub exit: u8,
}

impl Outcome {
    fn emit(config: &RunConfig, text: String, json: Value, ok: bool) -> Outcome {
        let text = match config.format {
            Format::Text => text,
            Format::Json => serde_json::to_string_pretty(&json).expect("json output"),
        };
        Outcome { text, exit: if ok { 0 } else { 1 } }
    }
}

fn signed(text: String) -> (bool, String) {
    match text.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, text),
    }
}

/// A scalar written as an OPE numerator: `1`, `K`, `(C/2)`, `(3*K/2)`.
fn numerator_scalar(c: &Scalar) -> (bool, String) {
    let terms: Vec<(Degree, Rational)> = c.terms().map(|(d, r)| (d, r.clone())).collect();
    let [(d, r)] = terms.as_slice() else {
        return (false, format!("({c})"));
    };
    let neg = r.is_negative();
    let r = r.abs();
    let (num, den) = (Rational::from_bigint(r.numer()), r.denom());
    let symbol = Scalar::monomial(*d, Rational::one()).to_string();
    let top = match (*d == Degree::ONE, num.is_one()) {
        (true, _) => num.to_string(),
        (false, true) => symbol,
        (false, false) => format!("{num}*{symbol}"),
    };
    let text = if den == 1.into() {
        top
    } else {
        format!("({top}/{den})")
    };
    (neg, text)
}

fn numerator_state(spec: &AlgebraSpec, s: &State) -> (bool, String) {
    let terms: Vec<_> = s.terms().collect();
    match terms.as_slice() {
        [(m, c)] if m.is_empty() => numerator_scalar(c),
        [_] => signed(s.display(spec).to_string()),
        _ => (false, format!("({})", s.display(spec))),
    }
}

fn ope_line(spec: &AlgebraSpec, a: &str, b: &str, terms: &[OpeTerm]) -> String {
    let mut out = format!("{a} {b} ~ ");
    let nonzero: Vec<_> = terms.iter().filter(|t| !t.state.is_zero()).collect();
    if nonzero.is_empty() {
        out.push_str("0 (no singular part)");
        return out;
    }
    for (i, t) in nonzero.iter().enumerate() {
        let (neg, num) = numerator_state(spec, &t.state);
        out.push_str(match (i, neg) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        });
        let pole = if t.pole == 1 { "(x-y)".to_string() } else { format!("(x-y)^{}", t.pole) };
        out.push_str(&format!("{num}/{pole}"));
    }
    out
}

fn parse_field(spec: &AlgebraSpec, text: &str) -> Result<FieldExpr, UsageError> {
    FieldExpr::parse(spec, text).map_err(|e| UsageError::invalid(format!("`{text}`: {e}")))
}

pub fn ope(config: &RunConfig, a: &str, b: &str) -> Result<Outcome, UsageError> {
    let spec = &config.algebra;
    let (fa, fb) = (parse_field(spec, a)?, parse_field(spec, b)?);
    let handle = VertexAlgebraHandle::new(spec.clone());
    let cfg = config.grid.locality_config();
    let cfg = newtonva::fields::LocalityConfig { weight_cutoff: config.grid.weight_cutoff, ..cfg };
    let ev = handle.evaluator();
    let report = ev.locality_order(&fa, &fb, &cfg);
    let window = format!("{}..{}, weight <= {}", cfg.window.0, cfg.window.1, cfg.weight_cutoff);
    let Some(order) = report.order else {
        let text = format!("{a} {b}: {} {window} (searched orders up to {})", report.status(), cfg.cap);
        let json = json!({"config": config.echo(), "fields": [a, b], "order": null, "status": report.status()});
        return Ok(Outcome::emit(config, text, json, false));
    };
    let terms = ev.ope_singular_part(&fa, &fb, &cfg).expect("local pair has an OPE");
    let mut text = ope_line(spec, a, b, &terms);
    text.push_str(&format!("\nlocality order: {order} ({} {window})", report.status()));
    if let Some(w) = &report.witness {
        text.push_str(&format!(
            "\nwitness: ({a} *{} {b})_{} {} = {}",
            w.n,
            w.m,
            w.input.display(spec),
            w.output.display(spec)
        ));
    }
    let json = json!({
        "config": config.echo(),
        "fields": [a, b],
        "order": order,
        "status": report.status(),
        "singular_part": terms.iter().map(|t| json!({"pole": t.pole, "state": t.state.display(spec).to_string()})).collect::<Vec<_>>(),
        "ope": ope_line(spec, a, b, &terms),
    });
    Ok(Outcome::emit(config, text, json, true))
}

pub fn verify(config: &RunConfig, identity: Identity, dong_n: Option<i64>) -> Result<Outcome, UsageError> {
    let handle = VertexAlgebraHandle::new(config.algebra.clone());
    let report = handle.run(identity, &config.grid, dong_n);
    let mut text = report.to_string();
    if identity == Identity::Dong {
        let range = dong_n.map_or(config.grid.n_range, |n| (n, n));
        for (label, r) in handle.dong_table(range, &config.grid.locality_config()) {
            let measured = r.measured.map_or("not local".to_string(), |m| m.to_string());
            let verdict = if r.holds { "<=" } else { "exceeds" };
            text.push_str(&format!("\n  {label}: measured {measured} {verdict} bound {}", r.bound));
        }
    }
    let ok = report.passed();
    let json: Value = serde_json::from_str(&report.to_json()).expect("report json");
    Ok(Outcome::emit(config, text, json, ok))
}

fn row(values: &[Scalar]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn newton(config: &RunConfig, sequence: &str, window: Option<&str>) -> Result<Outcome, UsageError> {
    let seq = Sequence::parse(sequence).map_err(|e| UsageError::invalid(format!("sequence `{sequence}`: {e}")))?;
    let (lo, hi) = match (window, &seq) {
        (Some(w), _) => parse_range(w).map_err(UsageError::Invalid)?,
        (None, Sequence::List(v)) if !v.is_empty() => (0, v.len() as i64 - 1),
        (None, _) => return Err(UsageError::invalid("a window a..b is required for formula sequences")),
    };
    let values = seq.sample(lo, hi).map_err(|e| UsageError::invalid(e.to_string()))?;
    let w = SequenceWindow::new(lo, values);
    let mut table = vec![w.clone()];
    while table.last().unwrap().len() > 1 && !table.last().unwrap().is_zero() {
        table.push(forward_difference(table.last().unwrap()).expect("window of length >= 2"));
    }
    let kernel = kernel_order(&w);
    let poly = kernel.order().map(|order| newton_coefficients(&w.rebased(0), order).expect("kernel order certifies coefficients"));
    let shift = match lo {
        0 => String::new(),
        lo if lo < 0 => format!(" in C(n + {}, i)", -lo),
        lo => format!(" in C(n - {lo}, i)"),
    };

    let mut text = format!("sequence: {} on {lo}..{hi}\ndifference table:", seq.describe());
    for (k, r) in table.iter().enumerate() {
        text.push_str(&format!("\n  Δ^{k}: {}", row(r.values())));
    }
    text.push_str(&format!("\nkernel order: {kernel}"));
    let mut samples = Vec::new();
    match &poly {
        Some(p) => {
            text.push_str(&format!("\nNewton coefficients: R = {p}{shift}"));
            samples = (1..=3).map(|j| (lo - j, p.evaluate(-j))).collect();
            let listed: Vec<_> = samples.iter().map(|(n, v)| format!("α({n}) = {v}")).collect();
            text.push_str(&format!("\nbackward extrapolation: {}", listed.join(", ")));
        }
        None => text.push_str("\nNewton coefficients: none (no vanishing difference on the window)"),
    }
    let json = json!({
        "sequence": seq.describe(),
        "window": [lo, hi],
        "difference_table": table.iter().map(|r| r.values().iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "kernel_order": match kernel { KernelOrder::Within { order, .. } => json!(order), KernelOrder::NoKernelWithinWindow { .. } => Value::Null },
        "coefficients": poly.as_ref().map(|p| p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        "coefficient_base": lo,
        "extrapolation": samples.iter().map(|(n, v)| json!({"n": n, "value": v.to_string()})).collect::<Vec<_>>(),
    });
    Ok(Outcome::emit(config, text, json, true))
}

fn generator(spec: &AlgebraSpec, label: &str) -> Result<Gen, UsageError> {
    spec.gen_by_label(label).or_else(|| spec.gen_by_field_label(label)).ok_or_else(|| {
        let known: Vec<_> = spec.generators().map(|g| spec.label(g).to_string()).collect();
        UsageError::invalid(format!("unknown generator `{label}` for {spec} (expected one of {})", known.join(", ")))
    })
}

pub fn commutator(config: &RunConfig, a: &str, m: i64, b: &str, n: i64) -> Result<Outcome, UsageError> {
    let spec = &config.algebra;
    let index = |k: i64| i32::try_from(k).map_err(|_| UsageError::invalid(format!("mode index {k} out of range")));
    let x = Mode::new(generator(spec, a)?, index(m)?);
    let y = Mode::new(generator(spec, b)?, index(n)?);
    let handle = VertexAlgebraHandle::new(spec.clone());
    let derived = match handle.commutator_modes(x, y) {
        Ok(d) => d,
        Err(e) => return Ok(Outcome { text: format!("commutator formula: {e}"), exit: 1 }),
    };
    let defining = spec.bracket(x, y);
    let basis = handle.basis(config.grid.weight_cutoff);
    let disagree: Vec<&State> = basis.iter().filter(|v| handle.apply_bracket(&derived, v) != handle.apply_bracket(&defining, v)).collect();
    let result = spec.display_bracket(&derived);
    let ok = disagree.is_empty();
    let mut text = result.clone();
    let scope = format!("{} basis states (weight <= {})", basis.len(), config.grid.weight_cutoff);
    if ok {
        text.push_str(&format!("\ncross-check: defining relations agree on {scope}"));
    } else {
        text.push_str(&format!(
            "\ncross-check FAILED: defining relations give {}; first disagreement on {}",
            spec.display_bracket(&defining),
            disagree[0].display(spec)
        ));
    }
    let json = json!({
        "config": config.echo(),
        "left": spec.display_mode(x),
        "right": spec.display_mode(y),
        "result": result,
        "modes": derived.modes.iter().map(|(c, z)| json!({"coeff": c.to_string(), "mode": spec.display_mode(*z)})).collect::<Vec<_>>(),
        "central": derived.central.to_string(),
        "defining": spec.display_bracket(&defining),
        "states_checked": basis.len(),
        "agrees": ok,
    });
    Ok(Outcome::emit(config, text, json, ok))
}
