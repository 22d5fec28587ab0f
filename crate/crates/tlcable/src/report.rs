//! Machine-readable outcome of the verification suites.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version tag written into every report; readers refuse other versions.
pub const REPORT_SCHEMA: &str = "tlcable.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Measured data with no pass/fail semantics.
    Info,
    /// Not run, e.g. past the tensor-dimension budget.
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
            Status::Skipped => "SKIP",
        }
    }
}

/// One check: `anchor` names the statement being checked, `check` the instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    pub anchor: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub bound: Option<f64>,
    pub detail: String,
    pub runtime_ms: u64,
}

impl CheckRecord {
    /// A record with status `Info` and no values.
    pub fn new(suite: &str, check: impl Into<String>, anchor: &str) -> Self {
        CheckRecord {
            suite: suite.into(),
            check: check.into(),
            anchor: anchor.into(),
            status: Status::Info,
            measured: None,
            bound: None,
            detail: String::new(),
            runtime_ms: 0,
        }
    }

    pub fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn pass_if(self, ok: bool) -> Self {
        self.status(if ok { Status::Pass } else { Status::Fail })
    }

    /// Non-finite values are kept out of the numeric field, which JSON cannot carry.
    pub fn measured(mut self, v: f64) -> Self {
        if v.is_finite() {
            self.measured = Some(v);
        } else {
            self.append(&format!("measured = {v}"));
        }
        self
    }

    pub fn bound(mut self, v: f64) -> Self {
        if v.is_finite() {
            self.bound = Some(v);
        } else {
            self.append(&format!("bound = {v}"));
        }
        self
    }

    pub fn detail(mut self, d: impl AsRef<str>) -> Self {
        self.append(d.as_ref());
        self
    }

    pub fn runtime_ms(mut self, ms: u64) -> Self {
        self.runtime_ms = ms;
        self
    }

    fn append(&mut self, d: &str) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(d);
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub info: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(records: &[CheckRecord]) -> Self {
        let mut s = Summary { total: records.len(), ..Summary::default() };
        for r in records {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Info => s.info += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    /// Run settings as strings, sorted by key.
    pub settings: BTreeMap<String, String>,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Default for VerificationReport {
    fn default() -> Self {
        Self::new(BTreeMap::new())
    }
}

impl VerificationReport {
    pub fn new(settings: BTreeMap<String, String>) -> Self {
        VerificationReport { schema: REPORT_SCHEMA.into(), settings, records: Vec::new(), summary: Summary::default() }
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
        self.summary = Summary::of(&self.records);
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = CheckRecord>) {
        self.records.extend(rs);
        self.summary = Summary::of(&self.records);
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// The same report with every runtime zeroed, for determinism comparisons.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.runtime_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: VerificationReport = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::Parse(format!("schema {} is not {REPORT_SCHEMA}", r.schema)));
        }
        if r.summary != Summary::of(&r.records) {
            return Err(Error::Parse("summary does not match the records".into()));
        }
        Ok(r)
    }

    /// Aligned text table followed by the summary line.
    pub fn to_text(&self) -> String {
        let rows: Vec<[String; 6]> = self
            .records
            .iter()
            .map(|r| {
                [
                    r.status.label().to_string(),
                    r.suite.clone(),
                    r.check.clone(),
                    r.measured.map(fmt_value).unwrap_or_default(),
                    r.bound.map(fmt_value).unwrap_or_default(),
                    r.detail.clone(),
                ]
            })
            .collect();
        let head = ["status", "suite", "check", "measured", "bound", "detail"];
        let mut width = head.map(str::len);
        for row in &rows {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let mut line = |cells: &[&str]| {
            let mut s = String::new();
            for (i, c) in cells.iter().enumerate() {
                if i + 1 == cells.len() {
                    s.push_str(c);
                } else {
                    let _ = write!(s, "{c:<w$}  ", w = width[i]);
                }
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(&head);
        for row in &rows {
            line(&row.iter().map(String::as_str).collect::<Vec<_>>());
        }
        let s = self.summary;
        let _ = writeln!(
            out,
            "{} checks: {} pass, {} fail, {} info, {} skipped",
            s.total, s.pass, s.fail, s.info, s.skipped
        );
        out
    }
}

fn fmt_value(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e6) {
        format!("{v:.4e}")
    } else {
        format!("{v:.6}")
    }
}
