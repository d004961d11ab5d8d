//! Experiment driver: sweeps over a list of bounds, one row per bound,
//! emitted as CSV or JSON.

mod run;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::PolyError;

pub use run::run_experiment;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("cannot fit an exponent: {0}")]
    Fit(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Integral points in the weighted box.
    Count,
    /// Smallest auxiliary polynomial through the box solutions.
    Aux,
    /// Twisted lines meeting the box.
    Twisted,
    /// Monomials of weighted degree M; the sweep values are the degrees.
    Monomials,
    /// Points of the affine cone mod p; the sweep values are the primes.
    Modp,
    /// Enumeration against a full-box scan.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub polynomial: String,
    pub e: u32,
    pub n: usize,
    pub b_values: Vec<u64>,
    pub budget_nodes: Option<u64>,
    pub budget_seconds: Option<f64>,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Lower prime threshold for the bad-prime estimate.
    pub sigma_threshold: Option<u64>,
    /// Weight vector for monomials mode.
    pub weights: Option<Vec<u64>>,
    /// Degree cap for the auxiliary polynomial search.
    pub m_max: Option<u64>,
    /// Record wall-clock times; off by default so reports are reproducible.
    pub timings: bool,
}

impl ExperimentConfig {
    pub fn new(mode: Mode, polynomial: &str, e: u32, n: usize, b_values: Vec<u64>) -> Self {
        ExperimentConfig {
            mode,
            polynomial: polynomial.to_string(),
            e,
            n,
            b_values,
            budget_nodes: None,
            budget_seconds: None,
            seed: crate::irreducible::DEFAULT_SEED,
            format: Format::Csv,
            out: None,
            threads: None,
            sigma_threshold: None,
            weights: None,
            m_max: None,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.b_values.is_empty() {
            return Err(HarnessError::Config("no B values".into()));
        }
        if self.b_values.iter().any(|&b| b < 2) {
            return Err(HarnessError::Config("every B must be at least 2".into()));
        }
        if self.b_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HarnessError::Config("B values must be strictly increasing".into()));
        }
        if self.e == 0 {
            return Err(HarnessError::Config("e must be at least 1".into()));
        }
        if self.mode != Mode::Monomials && self.n == 0 {
            return Err(HarnessError::Config("n must be at least 1".into()));
        }
        if self.mode == Mode::Monomials && self.weights.as_ref().is_none_or(Vec::is_empty) {
            return Err(HarnessError::Config("monomials mode needs --weights".into()));
        }
        if self.threads == Some(0) {
            return Err(HarnessError::Config("--threads must be positive".into()));
        }
        if self.budget_seconds.is_some_and(|s| !(s > 0.0) || !s.is_finite()) {
            return Err(HarnessError::Config("--budget-seconds must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "message", rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    /// Work limit hit; the row has no observation.
    Budget(String),
    /// The row ran but a checked property failed.
    Failed(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "B")]
    pub b: u64,
    pub observed: Option<f64>,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
    pub runtime_ms: u64,
    pub status: RowStatus,
    /// Mode-specific extras.
    pub detail: BTreeMap<String, serde_json::Value>,
}

impl SweepRow {
    pub(crate) fn new(b: u64) -> Self {
        SweepRow {
            b,
            observed: None,
            bound: None,
            ratio: None,
            runtime_ms: 0,
            status: RowStatus::Ok,
            detail: BTreeMap::new(),
        }
    }

    pub(crate) fn observe(&mut self, observed: f64, bound: f64) {
        self.observed = Some(observed);
        self.bound = Some(bound);
        self.ratio = (bound > 0.0 && bound.is_finite()).then(|| observed / bound);
    }

    pub(crate) fn note(&mut self, key: &str, v: impl Serialize) {
        let v = serde_json::to_value(v).expect("detail values serialize");
        self.detail.insert(key.to_string(), v);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub holds: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: ExperimentConfig,
    pub rows: Vec<SweepRow>,
    pub fitted_exponent: Option<f64>,
    pub claimed_exponent: Option<f64>,
    pub hypotheses: Vec<HypothesisCheck>,
}

impl SweepReport {
    pub fn all_rows_over_budget(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| matches!(r.status, RowStatus::Budget(_)))
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| matches!(r.status, RowStatus::Failed(_))).count()
    }
}

/// Least-squares slope of `log N` against `log B`.
pub fn fit_exponent(series: &[(f64, f64)]) -> Result<f64, HarnessError> {
    if series.iter().any(|&(b, n)| !(b > 0.0) || !(n > 0.0)) {
        return Err(HarnessError::Fit("B and N must be positive".into()));
    }
    let pts: Vec<(f64, f64)> = series.iter().map(|&(b, n)| (b.ln(), n.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx == 0.0 {
        return Err(HarnessError::Fit("need at least two distinct B values".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}

fn field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_csv<W: Write>(report: &SweepReport, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["B", "observed", "bound", "ratio", "runtime_ms"])?;
    for r in &report.rows {
        w.write_record([
            r.b.to_string(),
            field(r.observed),
            field(r.bound),
            field(r.ratio),
            r.runtime_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(report: &SweepReport, mut out: W) -> Result<(), HarnessError> {
    serde_json::to_writer_pretty(&mut out, report)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn render(report: &SweepReport, format: Format) -> Result<Vec<u8>, HarnessError> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(report, &mut buf)?,
        Format::Json => write_json(report, &mut buf)?,
    }
    Ok(buf)
}

/// Writes the report to `path`, or to standard output when `path` is `None`.
pub fn emit_report(report: &SweepReport, format: Format, path: Option<&std::path::Path>) -> Result<(), HarnessError> {
    let bytes = render(report, format)?;
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}
