//! Report encodings shared by the verification suite and the scans.
//!
//! The machine-readable form is JSON Lines: one object per check (or per
//! scanned time), fields in a fixed order, every float printed with 15
//! significant digits. Equal inputs give byte-identical output; timings are
//! therefore left out of it.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::ser::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::explore::{rational_pi_label, ScanResult};
use crate::verify::CheckResult;

/// Formats `x` with 15 significant digits in exponent notation.
pub fn fmt15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // Avoid printing -0.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.14e}")
}

/// A float serialized as a JSON number with 15 significant digits
/// (`null` when not finite).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let text = if self.0.is_finite() { fmt15(self.0) } else { "null".into() };
        RawValue::from_string(text).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
}

impl Serialize for ParamValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            ParamValue::Int(v) => s.serialize_i64(v),
            ParamValue::Real(v) => Num(v).serialize(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ReportRecord {
    pub id: String,
    pub params: BTreeMap<String, ParamValue>,
    pub status: &'static str,
    pub passed: bool,
    /// `pass`, `fail` (negative controls) or `none` (exploration rows).
    pub expected: &'static str,
    pub max_deviation: Num,
    pub tolerance: Num,
    pub phase_re: Num,
    pub phase_im: Num,
    pub anchor: String,
    pub note: Option<String>,
}

impl ReportRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report records always serialize")
    }
}

impl From<&CheckResult> for ReportRecord {
    fn from(r: &CheckResult) -> Self {
        Self {
            id: r.check_id.clone(),
            params: r.params.iter().map(|(k, v)| (k.to_string(), ParamValue::Int(v))).collect(),
            status: r.status.as_str(),
            passed: r.passed,
            expected: r.expectation.as_str(),
            max_deviation: Num(r.max_deviation),
            tolerance: Num(r.tolerance),
            phase_re: Num(r.phase.re),
            phase_im: Num(r.phase.im),
            anchor: r.anchor.to_string(),
            note: r.note.clone(),
        }
    }
}

pub const SCAN_ANCHOR: &str = "parity-usable: diagonal, constant phase per parity class, relative phase +-pi/2";

/// One record per scanned time, then a `<id>.best` record.
pub fn scan_records(scan: &ScanResult, tolerance: f64) -> Vec<ReportRecord> {
    let id = format!("explore.{}", scan.hamiltonian_id);
    let row = |id: String, i: usize| {
        let v = &scan.verdicts[i];
        let t = scan.times[i];
        let mut params = BTreeMap::new();
        params.insert("n".to_string(), ParamValue::Int(scan.n as i64));
        params.insert("t".to_string(), ParamValue::Real(t));
        let mut note = format!(
            "diagonal={} off_diag_max={} class_spread={} relative_phase={}",
            v.is_diagonal,
            fmt15(v.off_diag_max),
            fmt15(v.class_spread),
            fmt15(v.relative_phase)
        );
        if let Some(h) = v.hadamard_frame_usable {
            let _ = write!(note, " hadamard_frame_usable={h}");
        }
        if let Some(label) = rational_pi_label(t) {
            let _ = write!(note, " t={label}");
        }
        ReportRecord {
            id,
            params,
            status: if v.parity_usable { "pass" } else { "fail" },
            passed: v.parity_usable,
            expected: "none",
            max_deviation: Num(v.distance_to_usable()),
            tolerance: Num(tolerance),
            phase_re: Num(v.phase_odd.re),
            phase_im: Num(v.phase_odd.im),
            anchor: SCAN_ANCHOR.to_string(),
            note: Some(note),
        }
    };
    let mut out: Vec<ReportRecord> = (0..scan.times.len()).map(|i| row(id.clone(), i)).collect();
    out.push(row(format!("{id}.best"), scan.best));
    out
}

pub fn to_json_lines(records: &[ReportRecord]) -> String {
    records.iter().map(|r| r.to_json() + "\n").collect()
}

fn render(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[String]| {
        let last = cells.len() - 1;
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i == last {
                out.push_str(cell);
            } else {
                let _ = write!(out, "{cell:<w$}  ");
            }
        }
        out.push('\n');
    };
    line(&mut out, &header.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    for row in rows {
        line(&mut out, row);
    }
    out
}

pub fn render_check_table(results: &[CheckResult]) -> String {
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            let verdict = match (r.status.as_str(), r.as_expected()) {
                ("skipped", _) => "SKIP".to_string(),
                (_, true) => "ok".to_string(),
                (_, false) => "UNEXPECTED".to_string(),
            };
            vec![
                r.check_id.clone(),
                r.params.to_string(),
                r.status.as_str().to_string(),
                r.expectation.as_str().to_string(),
                verdict,
                format!("{:.3e}", r.max_deviation),
                format!("{:+.6}{:+.6}i", r.phase.re, r.phase.im),
                format!("{:.1?}", r.elapsed),
                match &r.note {
                    Some(note) => format!("{} [{note}]", r.anchor),
                    None => r.anchor.to_string(),
                },
            ]
        })
        .collect();
    render(
        &["check", "params", "status", "expect", "verdict", "max_dev", "phase", "time", "identity"],
        &rows,
    )
}

pub fn render_scan_table(scan: &ScanResult) -> String {
    let rows: Vec<Vec<String>> = scan
        .times
        .iter()
        .zip(&scan.verdicts)
        .map(|(&t, v)| {
            vec![
                format!("{t:.12}"),
                rational_pi_label(t).unwrap_or_default(),
                if v.parity_usable { "USABLE".into() } else { "-".into() },
                v.is_diagonal.to_string(),
                format!("{:.3e}", v.off_diag_max),
                format!("{:.3e}", v.class_spread),
                format!("{:+.9}", v.relative_phase),
                match v.hadamard_frame_usable {
                    Some(true) => "near-miss".into(),
                    Some(false) => "no".into(),
                    None => "".into(),
                },
            ]
        })
        .collect();
    let mut out = render(
        &["t", "t/pi", "verdict", "diagonal", "off_diag", "spread", "rel_phase", "h_frame"],
        &rows,
    );
    let best = scan.best_verdict();
    let usable = scan.usable_times();
    let _ = writeln!(
        out,
        "\n{}: n={} grid={} usable={} hadamard-frame near-misses={}",
        scan.hamiltonian_id,
        scan.n,
        scan.times.len(),
        usable.len(),
        scan.hadamard_frame_near_misses().len()
    );
    let _ = writeln!(
        out,
        "best t={:.12} ({}) usable={} distance={:.3e} relative_phase={:+.9}",
        scan.best_time(),
        rational_pi_label(scan.best_time()).unwrap_or_else(|| "-".into()),
        best.parity_usable,
        best.distance_to_usable(),
        best.relative_phase
    );
    out
}
