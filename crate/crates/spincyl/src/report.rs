//! Machine-readable verification reports.
//!
//! Reports are byte-deterministic for identical inputs, flags, and tool
//! version: field order is fixed by the struct layout, check order by
//! insertion, and no timestamps or environment data are recorded.

use crate::harmful::Residuals;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// Largest residual magnitude (exact zero reports as 0).
    pub residual: f64,
    /// True when the residual is identically zero in exact arithmetic.
    pub exact_zero: bool,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Arithmetic mode a report was produced under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Float,
}

/// The full verdict tree for one invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub fixture: String,
    pub mode: Mode,
    pub tolerance: f64,
    pub conventions: Vec<String>,
    pub warnings: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl ReportDocument {
    pub fn new(command: &str, fixture: &str, mode: Mode, tolerance: f64) -> Self {
        ReportDocument {
            tool: "spincyl".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            fixture: fixture.into(),
            mode,
            tolerance,
            conventions: Vec::new(),
            warnings: Vec::new(),
            checks: Vec::new(),
            pass: true,
        }
    }

    /// Record a residual set under one name; pass means identically zero in
    /// exact mode, or below tolerance in float mode.
    pub fn push_residuals<S: Scalar>(&mut self, name: &str, residuals: &Residuals<S>) {
        let residual = residuals.max_magnitude();
        let exact_zero = S::exact_mode() && residuals.is_exactly_zero();
        let pass = if S::exact_mode() {
            residuals.is_exactly_zero()
        } else {
            residuals.all_zero_within(self.tolerance)
        };
        self.push_check(CheckResult {
            name: name.into(),
            residual,
            exact_zero,
            pass,
            detail: None,
        });
    }

    pub fn push_check(&mut self, check: CheckResult) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn push_flag(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.push_check(CheckResult {
            name: name.into(),
            residual: if pass { 0.0 } else { f64::NAN },
            exact_zero: pass,
            pass,
            detail: Some(detail.into()),
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Fixed-format human summary, one line per check.
    pub fn human_summary(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} {} :: {} :: {} ({:?} mode, tol {:e})\n",
            self.tool, self.version, self.command, self.fixture, self.mode, self.tolerance
        ));
        for line in &self.conventions {
            out.push_str(&format!("  convention: {line}\n"));
        }
        for line in &self.warnings {
            out.push_str(&format!("  warning: {line}\n"));
        }
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            let zero = if c.exact_zero {
                "exact zero".to_string()
            } else {
                format!("residual {:.3e}", c.residual)
            };
            out.push_str(&format!("  [{status}] {:<28} {zero}", c.name));
            if let Some(d) = &c.detail {
                out.push_str(&format!("  ({d})"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "verdict: {}\n",
            if self.pass { "PASS" } else { "FAIL" }
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use num_traits::Zero;

    #[test]
    fn residual_bookkeeping() {
        let mut report = ReportDocument::new("check-harmful", "fixture", Mode::Exact, 1e-9);
        let mut ok = Residuals::<Exact>::new();
        ok.push("a", vec![Exact::zero()]);
        report.push_residuals("zero-check", &ok);
        assert!(report.pass);
        let mut bad = Residuals::<Exact>::new();
        bad.push("b", vec![Exact::from_ratio(1, 1_000_000)]);
        report.push_residuals("nonzero-check", &bad);
        assert!(!report.pass);
        assert!(report.checks[0].exact_zero);
        assert!(!report.checks[1].exact_zero);
    }

    #[test]
    fn byte_deterministic_serialization() {
        let build = || {
            let mut r = ReportDocument::new("lemmas", "su2_round", Mode::Exact, 1e-9);
            r.conventions.push("spinor basis: standard".into());
            let mut res = Residuals::<Exact>::new();
            res.push("x", vec![Exact::zero()]);
            r.push_residuals("lemma", &res);
            r
        };
        assert_eq!(build().to_json(), build().to_json());
        assert_eq!(build().human_summary(), build().human_summary());
    }

    #[test]
    fn summary_contains_verdict_lines() {
        let mut r = ReportDocument::new("extend", "example_31", Mode::Float, 1e-9);
        r.push_flag("harmful", true, "divergence constraint holds");
        let text = r.human_summary();
        assert!(text.contains("[PASS] harmful"));
        assert!(text.contains("verdict: PASS"));
    }
}
