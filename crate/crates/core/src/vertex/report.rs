use std::fmt;
use std::time::Duration;

use serde::Serialize;

use crate::fields::{CheckReport, Witness};

use super::VerificationGrid;

/// Outcome of one verification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub identity: String,
    pub algebra: String,
    pub grid: VerificationGrid,
    pub cells_checked: usize,
    pub failures: Vec<Witness>,
    /// Wall-clock seconds.
    pub elapsed: f64,
}

impl Report {
    pub fn new(identity: impl Into<String>, algebra: impl Into<String>, grid: VerificationGrid) -> Self {
        Report { identity: identity.into(), algebra: algebra.into(), grid, cells_checked: 0, failures: Vec::new(), elapsed: 0.0 }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn absorb(&mut self, check: CheckReport) {
        self.cells_checked += check.cells_checked;
        self.failures.extend(check.failures);
    }

    pub fn merge(&mut self, other: Report) {
        self.cells_checked += other.cells_checked;
        self.failures.extend(other.failures);
        self.elapsed += other.elapsed;
    }

    pub fn fail(&mut self, context: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>) {
        self.failures.push(Witness { context: context.into(), lhs: lhs.into(), rhs: rhs.into() });
    }

    pub(super) fn finish(mut self, elapsed: Duration) -> Self {
        self.elapsed = elapsed.as_secs_f64();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn range(r: (i64, i64)) -> String {
    format!("{}..{}", r.0, r.1)
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.grid;
        writeln!(f, "identity: {}", self.identity)?;
        writeln!(f, "algebra: {}", self.algebra)?;
        writeln!(
            f,
            "grid: l {}, m {}, n {}, weight <= {}",
            range(g.l_range),
            range(g.m_range),
            range(g.n_range),
            g.weight_cutoff
        )?;
        writeln!(f, "cells checked: {}", self.cells_checked)?;
        writeln!(f, "failures: {}", self.failures.len())?;
        for w in self.failures.iter().take(5) {
            writeln!(f, "  at {}: {} != {}", w.context, w.lhs, w.rhs)?;
        }
        write!(f, "elapsed: {:.3}s", self.elapsed)
    }
}
