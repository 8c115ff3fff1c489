//! Uniform result type for every check in the crate.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

/// Either a floating point residual/tolerance or an exact comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Measure {
    Value(f64),
    Exact(ExactTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactTag {
    Exact,
}

impl Measure {
    pub const EXACT: Measure = Measure::Exact(ExactTag::Exact);

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Measure::Value(v) => Some(*v),
            Measure::Exact(_) => None,
        }
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Measure::Value(v) => write!(f, "{v:.3e}"),
            Measure::Exact(_) => f.write_str("exact"),
        }
    }
}

/// Outcome of a single named check.
///
/// `pass` is derived, never set by hand: a numeric check passes iff
/// `residual <= tolerance` (NaN fails), an exact check passes iff the exact
/// comparison succeeded.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub parameters: BTreeMap<String, String>,
    pub residual: Measure,
    pub tolerance: Measure,
    pub pass: bool,
    pub runtime_ms: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn numeric(check: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        VerificationReport {
            check: check.into(),
            parameters: BTreeMap::new(),
            residual: Measure::Value(residual),
            tolerance: Measure::Value(tolerance),
            pass: residual <= tolerance,
            runtime_ms: 0,
            notes: Vec::new(),
        }
    }

    pub fn exact(check: impl Into<String>, matched: bool) -> Self {
        VerificationReport {
            check: check.into(),
            parameters: BTreeMap::new(),
            residual: Measure::EXACT,
            tolerance: Measure::EXACT,
            pass: matched,
            runtime_ms: 0,
            notes: Vec::new(),
        }
    }

    /// Wall-clock budget in seconds; exempt from tolerance overrides.
    pub fn budget(check: impl Into<String>, seconds: f64, limit: f64) -> Self {
        Self::numeric(check, seconds, limit).param("unit", "s")
    }

    pub fn is_budget(&self) -> bool {
        self.parameters.get("unit").is_some_and(|u| u == "s")
    }

    /// Re-judges a numeric residual against `tol`. Exact checks and budgets
    /// are returned unchanged.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        if let (Measure::Value(r), false) = (self.residual, self.is_budget()) {
            self.tolerance = Measure::Value(tol);
            self.pass = r <= tol;
        }
        self
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn timed(mut self, started: Instant) -> Self {
        self.runtime_ms = started.elapsed().as_millis() as u64;
        self
    }

    /// Folds another numeric residual into this report (max of residuals).
    pub fn absorb(&mut self, residual: f64) {
        if let Measure::Value(r) = &mut self.residual {
            *r = if residual.is_nan() || r.is_nan() {
                f64::NAN
            } else {
                r.max(residual)
            };
            let tol = self.tolerance.as_f64().unwrap_or(0.0);
            self.pass = *r <= tol;
        }
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{status}] {} residual={} tol={}",
            self.check, self.residual, self.tolerance
        )?;
        for (k, v) in &self.parameters {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}
