use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::CliError;
use crate::signsearch::{SharpnessResult, SignBallReport};

/// One sign-free ball measurement compared with one bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignRow {
    pub case: String,
    pub domain: String,
    pub bound_name: String,
    #[serde(flatten)]
    pub report: SignBallReport,
    /// None for exploratory rows whose bound is not a claim.
    pub pass: Option<bool>,
}

/// A scalar check: `value <= limit` (or `>=` for floors, see `kind`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub case: String,
    pub check: String,
    pub n: Option<usize>,
    pub lambda: Option<f64>,
    /// r, t or another per-check parameter.
    pub param: Option<f64>,
    pub value: f64,
    pub limit: f64,
    /// The check passes when value ≥ limit instead of ≤.
    pub floor: bool,
}

impl Check {
    pub fn pass(&self) -> bool {
        if self.floor {
            self.value >= self.limit
        } else {
            self.value <= self.limit
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub sign_balls: Vec<SignRow>,
    pub checks: Vec<Check>,
    pub sharpness: Vec<SharpnessResult>,
    pub accuracy_errors: Vec<String>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.accuracy_errors.is_empty() && self.failures().is_empty()
    }

    /// Human-readable description of every failing row or check.
    pub fn failures(&self) -> Vec<String> {
        let rows = self.sign_balls.iter().filter(|r| r.pass == Some(false)).map(|r| {
            format!(
                "{} {}: r_lower {} exceeds {} bound {}",
                r.case,
                r.domain,
                r.report.r_lower,
                r.bound_name,
                r.report.bound.unwrap_or(f64::NAN)
            )
        });
        let checks = self.checks.iter().filter(|c| !c.pass()).map(|c| {
            let op = if c.floor { "below" } else { "above" };
            format!("{} {}: {} is {op} {}", c.case, c.check, c.value, c.limit)
        });
        rows.chain(checks).collect()
    }

    /// Writes report.csv, residuals.csv and report.json into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let header = format!("# generated_unix={stamp}\n");

        let mut sign = csv::Writer::from_writer(header.clone().into_bytes());
        let csv_err = |e: csv::Error| CliError::Io(e.to_string());
        sign.write_record([
            "case",
            "seed",
            "domain",
            "dim",
            "resolution",
            "center",
            "r_lower",
            "r_upper",
            "bound_name",
            "bound",
            "ratio",
            "pass",
        ])
        .map_err(csv_err)?;
        for r in &self.sign_balls {
            let center: Vec<String> = r.report.center.iter().map(|c| c.to_string()).collect();
            sign.write_record([
                r.case.clone(),
                self.seed.to_string(),
                r.domain.clone(),
                r.report.center.len().to_string(),
                r.report.resolution.to_string(),
                center.join(";"),
                r.report.r_lower.to_string(),
                r.report.r_upper.to_string(),
                r.bound_name.clone(),
                opt(r.report.bound),
                opt(r.report.ratio),
                r.pass.map(|p| p.to_string()).unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
        write_file(&dir.join("report.csv"), &sign.into_inner().map_err(|e| CliError::Io(e.to_string()))?)?;

        let mut res = csv::Writer::from_writer(header.into_bytes());
        res.write_record(["case", "check", "n", "lambda", "param", "value", "limit", "pass"]).map_err(csv_err)?;
        for c in &self.checks {
            res.write_record([
                c.case.clone(),
                c.check.clone(),
                c.n.map(|n| n.to_string()).unwrap_or_default(),
                opt(c.lambda),
                opt(c.param),
                c.value.to_string(),
                c.limit.to_string(),
                c.pass().to_string(),
            ])
            .map_err(csv_err)?;
        }
        write_file(&dir.join("residuals.csv"), &res.into_inner().map_err(|e| CliError::Io(e.to_string()))?)?;

        let json = serde_json::json!({
            "generated_unix": stamp,
            "pass": self.pass(),
            "report": self,
        });
        let text = serde_json::to_vec_pretty(&json).map_err(|e| CliError::Io(e.to_string()))?;
        write_file(&dir.join("report.json"), &text)
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub(super) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut f = fs::File::create(path).map_err(|e| io_error(path, e))?;
    f.write_all(bytes).map_err(|e| io_error(path, e))
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}
