//! Seeded property-suite runner and machine-readable reports.
//!
//! Every registered case draws its random instances from its own stream,
//! seeded by `sub_seed(seed, index)` where `index` is the case's position in
//! the full registry. Filtering by suite or adding cases at the end therefore
//! never changes the instances an existing case sees.

mod cases;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{sub_seed, XorShift64Star};

pub use cases::registry;

pub const SUITES: [&str; 5] = ["spinfactor", "normlab", "clifford", "observer", "all"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArithmeticMode {
    Integer,
    #[default]
    Float,
}

impl FromStr for ArithmeticMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integer" => Ok(Self::Integer),
            "float" => Ok(Self::Float),
            other => Err(Error::InvalidConfig(format!(
                "unknown arithmetic mode `{other}`"
            ))),
        }
    }
}

impl fmt::Display for ArithmeticMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Integer => "integer",
            Self::Float => "float",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub json_path: Option<PathBuf>,
    pub mode: ArithmeticMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            suite: "all".into(),
            seed: 42,
            trials: 200,
            tol: 1e-9,
            json_path: None,
            mode: ArithmeticMode::Float,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !SUITES.contains(&self.suite.as_str()) {
            return Err(Error::UnknownSuite(self.suite.clone()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// How a case decides pass/fail from its worst residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// Residual must be exactly zero.
    Exact,
    /// Residual must not exceed the given bound.
    Fixed(f64),
    /// Residual must not exceed the run's `tol`.
    Run,
}

impl Tolerance {
    fn bound(self, run_tol: f64) -> f64 {
        match self {
            Tolerance::Exact => 0.0,
            Tolerance::Fixed(x) => x,
            Tolerance::Run => run_tol,
        }
    }
}

/// Per-case execution context.
pub struct CaseContext {
    pub rng: XorShift64Star,
    pub trials: usize,
    pub tol: f64,
    pub mode: ArithmeticMode,
}

pub struct Case {
    pub suite: &'static str,
    pub name: &'static str,
    pub tolerance: Tolerance,
    pub run: fn(&mut CaseContext) -> Result<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub status: Status,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub cases: Vec<CaseResult>,
    pub passed: bool,
}

impl SuiteReport {
    /// Pretty JSON with two-space indentation and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }
}

/// Runs one registered case and folds errors into a failing result.
pub fn run_case(index: usize, case: &Case, cfg: &RunConfig) -> CaseResult {
    let mut ctx = CaseContext {
        rng: XorShift64Star::new(sub_seed(cfg.seed, index as u64)),
        trials: cfg.trials,
        tol: cfg.tol,
        mode: cfg.mode,
    };
    let (status, max_residual) = match (case.run)(&mut ctx) {
        Ok(r) if r <= case.tolerance.bound(cfg.tol) => (Status::Pass, r),
        Ok(r) => (Status::Fail, r),
        Err(_) => (Status::Fail, f64::INFINITY),
    };
    CaseResult {
        name: format!("{}/{}", case.suite, case.name),
        status,
        max_residual,
    }
}

pub fn run_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let cases: Vec<CaseResult> = registry()
        .iter()
        .enumerate()
        .filter(|(_, c)| cfg.suite == "all" || c.suite == cfg.suite)
        .map(|(i, c)| run_case(i, c, cfg))
        .collect();
    let passed = cases.iter().all(|c| c.status == Status::Pass);
    let report = SuiteReport {
        suite: cfg.suite.clone(),
        seed: cfg.seed,
        trials: cfg.trials,
        tolerance: cfg.tol,
        cases,
        passed,
    };
    if let Some(path) = &cfg.json_path {
        std::fs::write(path, report.to_json())
            .map_err(|e| Error::InvalidConfig(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(report)
}
