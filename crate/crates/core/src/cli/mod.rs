//! Command-line surface: map specifications, JSON reports, SVG figures and
//! parameter scans.
//!
//! A map is given as a JSON object whose keys are the twelve coefficient
//! names `a20, a11, a02, a10, a01, a00, b20, b11, b02, b10, b01, b00`
//! (missing keys are zero). Values are numbers or strings; strings may hold
//! fractions such as `"3/7"`. Two optional keys are recognized: `label`, a
//! hint that is checked against the computed class, and `mode`, either
//! `"float"` or `"exact"`.

mod plot;
mod report;
mod scan;
mod spec;

pub use plot::{cmd_plot, render_plot, PlotOptions, PlotSummary};
pub use report::{cmd_classify, Report, WitnessReport};
pub use scan::{cmd_scan, parse_direction, ScanGrid, ScanOptions};
pub use spec::{Coefficient, MapSpec, Mode, COEFFICIENT_KEYS};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::normalize::ClassifySettings;
use crate::scalar::Tolerance;
use crate::selfcheck::{self, CriterionResult, SelfCheckConfig};

/// Global options shared by all commands.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Options {
    pub seed: u64,
    /// Overrides the relative zero tolerance.
    pub tol: Option<f64>,
    /// Forces exact rational classification.
    pub exact: bool,
}

impl Options {
    pub fn tolerance(&self) -> Tolerance {
        self.tol.map(Tolerance::new).unwrap_or_default()
    }

    pub fn settings(&self) -> ClassifySettings {
        ClassifySettings { tol: self.tolerance(), ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Parse,
    Domain,
    Verification,
    Io,
    SelfTest,
}

/// A failure with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Parse, message: message.into() }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Domain, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Io, message: message.into() }
    }

    /// 2 for unreadable input, 3 for maps outside the domain, 4 for failed
    /// verification.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Parse | ErrorKind::Io => 2,
            ErrorKind::Domain => 3,
            ErrorKind::Verification | ErrorKind::SelfTest => 4,
        }
    }

    /// Diagnostic JSON, one line.
    pub fn to_json(&self) -> String {
        let v = serde_json::json!({
            "error": self.kind,
            "message": self.message,
            "exit_code": self.exit_code(),
        });
        v.to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::Verification { .. } | Error::LongCaseResidual { .. } | Error::NoGuaranteedRoot { .. } => {
                ErrorKind::Verification
            }
            Error::InvalidArgument(_) => ErrorKind::Parse,
            _ => ErrorKind::Domain,
        };
        Self { kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e.to_string())
    }
}

/// Runs the acceptance criteria (all, or only `only`). The error carries
/// the failed criterion numbers.
pub fn cmd_selftest(opts: &Options, only: Option<u8>) -> Result<Vec<CriterionResult>, CliError> {
    let cfg = SelfCheckConfig { seed: opts.seed, tol: opts.tolerance() };
    let results = match only {
        Some(id) => vec![selfcheck::run_criterion(id, &cfg).map_err(|e| CliError::parse(e.to_string()))?],
        None => selfcheck::run_all(&cfg),
    };
    Ok(results)
}

/// Failure for a selftest run, if any criterion failed.
pub fn selftest_verdict(results: &[CriterionResult]) -> Result<(), CliError> {
    let failed: Vec<String> = results.iter().filter(|r| !r.passed()).map(|r| r.id.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError { kind: ErrorKind::SelfTest, message: format!("failed criteria: {}", failed.join(", ")) })
    }
}
