//! Run reports and their CSV / JSON encodings.
//!
//! CSV columns, in order:
//! `case,seed,check,inputs,value,bound,relation,tolerance,passed,t,found,attempts_used`.
//! The last three are filled only for random-search rows. Floats use the
//! shortest decimal that round-trips.
//!
//! JSON is canonical: object keys are sorted, floats use the shortest
//! round-trip form, and the document ends with a newline.

use std::{fs, path::Path, time::Duration};

use serde::Serialize;

use crate::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// How `value` is compared with `bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `value <= bound + tolerance`.
    Le,
    /// `|value - bound| <= tolerance`.
    Eq,
    /// Recorded only; always passes.
    Info,
}

impl Relation {
    fn as_str(self) -> &'static str {
        match self {
            Self::Le => "le",
            Self::Eq => "eq",
            Self::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchRecord {
    pub t: u64,
    pub found: Option<u64>,
    pub attempts_used: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub case: usize,
    pub seed: u64,
    pub check: String,
    pub inputs: String,
    pub value: f64,
    pub bound: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl Row {
    pub fn new(
        case: usize,
        seed: u64,
        check: &str,
        inputs: String,
        value: f64,
        bound: f64,
        relation: Relation,
        tolerance: f64,
    ) -> Self {
        let passed = match relation {
            Relation::Le => value <= bound + tolerance,
            Relation::Eq => (value - bound).abs() <= tolerance,
            Relation::Info => true,
        };
        Self {
            case,
            seed,
            check: check.to_string(),
            inputs,
            value,
            bound,
            relation,
            tolerance,
            passed,
            search: None,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Serialize) -> Self {
        self.detail = Some(serde_json::to_value(detail).expect("detail serializes"));
        self
    }

    pub fn with_search(mut self, search: SearchRecord) -> Self {
        self.search = Some(search);
        self
    }

    /// How far `value` lies beyond `bound`, ignoring the tolerance; zero when inside.
    pub fn excess(&self) -> f64 {
        let e = match self.relation {
            Relation::Le => self.value - self.bound,
            Relation::Eq => (self.value - self.bound).abs(),
            Relation::Info => 0.0,
        };
        if e.is_nan() {
            f64::INFINITY
        } else {
            e.max(0.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub cases: usize,
    pub passes: usize,
    pub failures: usize,
    pub max_violation: f64,
}

impl Summary {
    pub fn of(rows: &[Row]) -> Self {
        let passes = rows.iter().filter(|r| r.passed).count();
        Self {
            cases: rows.len(),
            passes,
            failures: rows.len() - passes,
            max_violation: rows.iter().map(Row::excess).fold(0.0, f64::max),
        }
    }
}

/// The command line as it affects results. The output path and format are
/// left out so that the same run written to two places is byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub command: String,
    pub input: Option<String>,
    pub seed: u64,
    pub trials: u64,
    pub qubit_cap: usize,
    pub tolerance: Option<f64>,
    pub betas: Option<Vec<f64>>,
    pub rng: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub rows: Vec<Row>,
    pub summary: Summary,
    /// Measured by the runner and printed separately; never serialized.
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl RunReport {
    pub fn new(config: ConfigEcho, rows: Vec<Row>, wall_clock: Duration) -> Self {
        let summary = Summary::of(&rows);
        Self { config, rows, summary, wall_clock }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failures == 0
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }
}

pub const CSV_COLUMNS: [&str; 12] = [
    "case",
    "seed",
    "check",
    "inputs",
    "value",
    "bound",
    "relation",
    "tolerance",
    "passed",
    "t",
    "found",
    "attempts_used",
];

fn float(x: f64) -> String {
    if x.is_finite() {
        ryu::Buffer::new().format_finite(x).to_string()
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn emit_report(report: &RunReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            // Round-tripping through `Value` sorts every object's keys.
            let value = serde_json::to_value(report).expect("report serializes");
            let mut out = serde_json::to_vec(&value).expect("value serializes");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_COLUMNS).expect("in-memory write");
            for r in &report.rows {
                let s = r.search.as_ref();
                w.write_record([
                    r.case.to_string(),
                    r.seed.to_string(),
                    r.check.clone(),
                    r.inputs.clone(),
                    float(r.value),
                    float(r.bound),
                    r.relation.as_str().into(),
                    float(r.tolerance),
                    r.passed.to_string(),
                    s.map(|s| s.t.to_string()).unwrap_or_default(),
                    s.and_then(|s| s.found).map(|f| f.to_string()).unwrap_or_default(),
                    s.map(|s| s.attempts_used.to_string()).unwrap_or_default(),
                ])
                .expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

pub fn write_report(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| LabError::Io { path: path.to_path_buf(), source })
}
