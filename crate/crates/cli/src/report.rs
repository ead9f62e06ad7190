use std::io::Write;
use std::path::Path;

use boehmian::convolve::{CheckResult, Status};
use serde::Serialize;

/// Outcome of one case. `Error` marks a case that could not be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Verified,
    Refuted,
    Inconclusive,
    Error,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Verified => "verified",
            RowStatus::Refuted => "refuted",
            RowStatus::Inconclusive => "inconclusive",
            RowStatus::Error => "error",
        }
    }
}

impl From<Status> for RowStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Verified => RowStatus::Verified,
            Status::Refuted => RowStatus::Refuted,
            Status::Inconclusive => RowStatus::Inconclusive,
        }
    }
}

/// One CSV row. `trace` feeds the convergence table and is not a CSV column.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub suite: String,
    pub case_id: String,
    pub lemma_ref: String,
    pub status: RowStatus,
    pub max_residual: f64,
    pub bound: f64,
    pub horizon: usize,
    pub wall_ms: u64,
    #[serde(skip)]
    pub trace: Vec<f64>,
    #[serde(skip)]
    pub message: Option<String>,
}

impl Row {
    pub fn from_check(suite: &str, case_id: impl Into<String>, lemma_ref: &str, r: &CheckResult) -> Self {
        Self {
            suite: suite.into(),
            case_id: case_id.into(),
            lemma_ref: lemma_ref.into(),
            status: r.status.into(),
            max_residual: r.max_residual,
            bound: r.bound,
            horizon: r.horizon,
            wall_ms: 0,
            trace: r.residuals.clone(),
            message: None,
        }
    }

    pub fn error(suite: &str, case_id: impl Into<String>, lemma_ref: &str, msg: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            case_id: case_id.into(),
            lemma_ref: lemma_ref.into(),
            status: RowStatus::Error,
            max_residual: f64::NAN,
            bound: f64::NAN,
            horizon: 0,
            wall_ms: 0,
            trace: Vec::new(),
            message: Some(msg.into()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Counts {
    pub cases: usize,
    pub verified: usize,
    pub refuted: usize,
    pub inconclusive: usize,
    pub errors: usize,
}

impl Counts {
    pub fn of(rows: &[Row]) -> Self {
        let mut c = Counts::default();
        for r in rows {
            c.cases += 1;
            match r.status {
                RowStatus::Verified => c.verified += 1,
                RowStatus::Refuted => c.refuted += 1,
                RowStatus::Inconclusive => c.inconclusive += 1,
                RowStatus::Error => c.errors += 1,
            }
        }
        c
    }

    pub fn failed(&self) -> bool {
        self.refuted > 0 || self.errors > 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub id: String,
    #[serde(flatten)]
    pub counts: Counts,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub prng: &'static str,
    pub seed: u64,
    pub grid_h: f64,
    pub horizon: usize,
    pub suites: Vec<SuiteSummary>,
    pub totals: Counts,
    pub exit_code: i32,
}

fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:e}")
    }
}

/// Writes the report header and rows.
pub fn write_csv(w: impl Write, seed: u64, rows: &[Row]) -> std::io::Result<()> {
    let mut w = w;
    writeln!(w, "# prng=chacha8 seed={seed}")?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "suite",
        "case_id",
        "lemma_ref",
        "status",
        "max_residual",
        "bound",
        "horizon",
        "wall_ms",
    ])?;
    for r in rows {
        out.write_record([
            r.suite.as_str(),
            r.case_id.as_str(),
            r.lemma_ref.as_str(),
            r.status.as_str(),
            &num(r.max_residual),
            &num(r.bound),
            &r.horizon.to_string(),
            &r.wall_ms.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Residual traces in long form: one line per (case, index).
pub fn write_convergence(w: impl Write, rows: &[Row]) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["suite", "case_id", "index", "residual"])?;
    for r in rows {
        for (i, v) in r.trace.iter().enumerate() {
            out.write_record([r.suite.as_str(), r.case_id.as_str(), &(i + 1).to_string(), &num(*v)])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_all(dir: &Path, seed: u64, rows: &[Row], summary: &Summary) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    write_csv(std::fs::File::create(dir.join("report.csv"))?, seed, rows)?;
    write_convergence(std::fs::File::create(dir.join("convergence.csv"))?, rows)?;
    let json = serde_json::to_string_pretty(summary).map_err(std::io::Error::other)?;
    std::fs::write(dir.join("summary.json"), json + "\n")
}
