//! The three shipped algebras, their vacuum modules in PBW form, and the
//! normal-ordering rewrite engine that computes exact mode actions.

mod lie;
mod module;
mod parse;
mod state;

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::newton::binomial;
use crate::scalars::{Rational, Scalar};

pub use lie::{FiniteLieAlgebra, LieError};
pub use module::VacuumModule;
pub use parse::ParseStateError;
pub use state::{State, StateBuilder, StateDisplay, StateWeight};

/// Index of a generator within its algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen(pub u8);

/// A Lie-algebra mode `g_n`. The derived order (index first, then
/// generator) is the PBW order: most negative index leftmost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub n: i32,
    pub gen: Gen,
}

impl Mode {
    pub fn new(gen: Gen, n: i32) -> Self {
        Mode { n, gen }
    }
}

/// Ordered PBW factors acting on the vacuum, leftmost first.
pub type Monomial = SmallVec<[Mode; 6]>;

pub fn monomial_weight(m: &[Mode]) -> i64 {
    -m.iter().map(|f| f.n as i64).sum::<i64>()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraKind {
    /// Level fixed to `K = 1`.
    Heisenberg,
    /// Level `K` kept symbolic.
    Affine(FiniteLieAlgebra),
    /// Central charge `C` kept symbolic, in the quotient where `L_{-1}` kills the vacuum.
    Virasoro,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    kind: AlgebraKind,
    labels: Vec<String>,
}

/// `[x_m, y_n]` as a sum of modes plus a central scalar.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bracket {
    pub modes: Vec<(Scalar, Mode)>,
    pub central: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown algebra `{0}` (expected heisenberg, affine or virasoro)")]
    UnknownAlgebra(String),
    #[error("unknown Lie algebra `{0}` (expected sl2)")]
    UnknownLie(String),
    #[error("invalid algebra config: {0}")]
    Json(String),
}

/// Algebra selection as it appears in JSON configs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub algebra: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie: Option<String>,
}

impl AlgebraSpec {
    pub fn heisenberg() -> Self {
        AlgebraSpec { kind: AlgebraKind::Heisenberg, labels: vec!["h".into()] }
    }

    pub fn virasoro() -> Self {
        AlgebraSpec { kind: AlgebraKind::Virasoro, labels: vec!["L".into()] }
    }

    pub fn affine(lie: FiniteLieAlgebra) -> Self {
        assert!(lie.dim() <= u8::MAX as usize, "Lie algebra too large");
        let labels = lie.labels().to_vec();
        AlgebraSpec { kind: AlgebraKind::Affine(lie), labels }
    }

    pub fn affine_sl2() -> Self {
        AlgebraSpec::affine(FiniteLieAlgebra::sl2())
    }

    pub fn from_config(cfg: &AlgebraConfig) -> Result<Self, ConfigError> {
        match cfg.algebra.to_ascii_lowercase().as_str() {
            "heisenberg" => Ok(AlgebraSpec::heisenberg()),
            "virasoro" => Ok(AlgebraSpec::virasoro()),
            "affine" => match cfg.lie.as_deref().unwrap_or("sl2") {
                "sl2" => Ok(AlgebraSpec::affine_sl2()),
                other => Err(ConfigError::UnknownLie(other.into())),
            },
            other => Err(ConfigError::UnknownAlgebra(other.into())),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: AlgebraConfig = serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))?;
        AlgebraSpec::from_config(&cfg)
    }

    pub fn config(&self) -> AlgebraConfig {
        match &self.kind {
            AlgebraKind::Heisenberg => AlgebraConfig { algebra: "heisenberg".into(), lie: None },
            AlgebraKind::Virasoro => AlgebraConfig { algebra: "virasoro".into(), lie: None },
            AlgebraKind::Affine(g) => AlgebraConfig { algebra: "affine".into(), lie: Some(g.name().into()) },
        }
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            AlgebraKind::Heisenberg => "heisenberg".into(),
            AlgebraKind::Virasoro => "virasoro".into(),
            AlgebraKind::Affine(g) => format!("affine {}", g.name()),
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> {
        (0..self.labels.len() as u8).map(Gen)
    }

    /// Label of the Lie-algebra modes (`h`, `e`, `L`, ...).
    pub fn label(&self, g: Gen) -> &str {
        &self.labels[g.0 as usize]
    }

    /// Name of the generating field (`omega` for Virasoro).
    pub fn field_label(&self, g: Gen) -> &str {
        match self.kind {
            AlgebraKind::Virasoro => "omega",
            _ => self.label(g),
        }
    }

    pub fn gen_by_label(&self, label: &str) -> Option<Gen> {
        self.labels.iter().position(|l| l == label).map(|i| Gen(i as u8))
    }

    pub fn gen_by_field_label(&self, label: &str) -> Option<Gen> {
        self.generators().find(|&g| self.field_label(g) == label)
    }

    /// Conformal weight of the generating field.
    pub fn conformal_weight(&self, _g: Gen) -> i64 {
        match self.kind {
            AlgebraKind::Virasoro => 2,
            _ => 1,
        }
    }

    /// Lie index of field mode `k`: `ω_k = L_{k-1}`, otherwise `a_k` itself.
    pub fn lie_index(&self, g: Gen, field_index: i64) -> i64 {
        field_index - (self.conformal_weight(g) - 1)
    }

    pub fn field_index(&self, g: Gen, lie_index: i64) -> i64 {
        lie_index + (self.conformal_weight(g) - 1)
    }

    /// Whether `g_n` is a PBW creation mode.
    pub fn is_creation(&self, n: i32) -> bool {
        match self.kind {
            AlgebraKind::Virasoro => n <= -2,
            _ => n <= -1,
        }
    }

    /// The defining commutation relations.
    pub fn bracket(&self, x: Mode, y: Mode) -> Bracket {
        let (m, n) = (x.n as i64, y.n as i64);
        match &self.kind {
            AlgebraKind::Heisenberg => {
                let central = if m + n == 0 { Scalar::from(m) } else { Scalar::zero() };
                Bracket { modes: Vec::new(), central }
            }
            AlgebraKind::Affine(g) => {
                let (a, b) = (x.gen.0 as usize, y.gen.0 as usize);
                let modes = g
                    .bracket(a, b)
                    .map(|(d, c)| (Scalar::from(c.clone()), Mode::new(Gen(d as u8), x.n + y.n)))
                    .collect();
                let central = if m + n == 0 {
                    Scalar::k().scale(&(g.form(a, b) * &Rational::from_integer(m)))
                } else {
                    Scalar::zero()
                };
                Bracket { modes, central }
            }
            AlgebraKind::Virasoro => {
                let modes =
                    if m != n { vec![(Scalar::from(m - n), Mode::new(x.gen, x.n + y.n))] } else { Vec::new() };
                let central = if m + n == 0 {
                    Scalar::c().scale(&(&binomial(m + 1, 3) * &Rational::new(1, 2)))
                } else {
                    Scalar::zero()
                };
                Bracket { modes, central }
            }
        }
    }

    pub fn display_mode(&self, x: Mode) -> String {
        format!("{}[{}]", self.label(x.gen), x.n)
    }

    pub fn display_bracket(&self, b: &Bracket) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (c, x) in &b.modes {
            parts.push(signed_term(c, &self.display_mode(*x)));
        }
        if !b.central.is_zero() {
            parts.push(signed_term(&b.central, ""));
        }
        join_signed(parts)
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `c*body` split into a sign and magnitude text (`body` empty for a bare scalar).
pub(crate) fn signed_term(c: &Scalar, body: &str) -> (bool, String) {
    let text = c.to_string();
    let single = c.terms().count() == 1;
    let (neg, mag) = match text.strip_prefix('-') {
        Some(rest) if single => (true, rest.to_string()),
        _ => (false, text),
    };
    let coeff = if single { mag } else { format!("({mag})") };
    let out = match (body.is_empty(), coeff.as_str()) {
        (true, _) => coeff,
        (false, "1") => body.to_string(),
        (false, _) => format!("{coeff}*{body}"),
    };
    (neg, out)
}

pub(crate) fn join_signed(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, t)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&t);
    }
    out
}

#[cfg(test)]
mod tests;
