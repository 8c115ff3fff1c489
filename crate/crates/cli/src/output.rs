use std::collections::BTreeMap;
use std::io::{self, Write};

use gessel_core::report::{Measure, VerificationReport};
use serde::Serialize;

/// One report as printed by `verify --json` and inside `report-all --json`.
#[derive(Debug, Serialize)]
pub struct ReportJson<'a> {
    pub check: &'a str,
    /// Lifted out of `parameters` when the check ran at a single z.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    pub residual: Measure,
    pub tolerance: Measure,
    pub pass: bool,
    pub runtime_ms: u64,
    pub parameters: &'a BTreeMap<String, String>,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    pub notes: &'a [String],
}

impl<'a> From<&'a VerificationReport> for ReportJson<'a> {
    fn from(r: &'a VerificationReport) -> Self {
        ReportJson {
            check: &r.check,
            z: r.parameters.get("z").and_then(|z| z.parse().ok()),
            residual: r.residual,
            tolerance: r.tolerance,
            pass: r.pass,
            runtime_ms: r.runtime_ms,
            parameters: &r.parameters,
            notes: &r.notes,
        }
    }
}

pub fn print_json<T: Serialize + ?Sized>(value: &T) -> io::Result<()> {
    let mut w = io::stdout().lock();
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)
}

pub fn print_reports(reports: &[VerificationReport], json: bool) -> io::Result<()> {
    if json {
        let out: Vec<ReportJson> = reports.iter().map(ReportJson::from).collect();
        return print_json(&out);
    }
    let mut w = io::stdout().lock();
    let width = reports.iter().map(|r| r.check.chars().count()).max().unwrap_or(0);
    for r in reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        let params: Vec<String> = r
            .parameters
            .iter()
            .filter(|(k, _)| k.as_str() != "unit")
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let pad = width - r.check.chars().count();
        writeln!(
            w,
            "{status}  {}{:pad$}  residual={:<10} tol={:<10} {}",
            r.check,
            "",
            r.residual.to_string(),
            r.tolerance.to_string(),
            params.join(" ")
        )?;
        for n in &r.notes {
            writeln!(w, "      {n}")?;
        }
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    writeln!(w, "{} checks, {} failed", reports.len(), failed)
}
