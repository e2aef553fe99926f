//! Seeded test harness and command implementations behind the `amou-k` binary.

mod cli;
mod commands;
pub mod suite;

use std::time::Duration;

use serde::Serialize;

use crate::error::Error;
use crate::tolerance::Tolerances;

pub use cli::{main_with_args, Cli};
pub use commands::{check_axioms, classify_element, equiv, kgroup, theta, Relation, Which};
pub use suite::{Failure, PropertyResult, SuiteResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// Everything that determines a report besides the input files.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: u64,
    pub tol: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 200,
            tol: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Pass = 0,
    PropertyFailure = 1,
    InputError = 2,
    NumericalFailure = 3,
}

impl ExitCode {
    pub fn of_error(e: &Error) -> Self {
        if e.is_numerical() {
            ExitCode::NumericalFailure
        } else {
            ExitCode::InputError
        }
    }
}

/// The outcome of one command. The JSON form excludes timing so that equal
/// inputs give byte-identical output.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub algebra: String,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteResult>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unsupported: Vec<String>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub result: serde_json::Value,
    pub passed: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    pub fn exit_code(&self) -> ExitCode {
        if self.suites.iter().any(SuiteResult::numerical_error) {
            ExitCode::NumericalFailure
        } else if self.passed {
            ExitCode::Pass
        } else {
            ExitCode::PropertyFailure
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} on {}: {}\n", self.command, self.algebra, if self.passed { "PASS" } else { "FAIL" });
        out += &format!(
            "seed {} trials {} tol_pred {:e} tol_path {:e} tol_bisect {:e}\n",
            self.config.seed, self.config.trials, self.config.tol.pred, self.config.tol.path, self.config.tol.bisect
        );
        for s in &self.suites {
            out += &format!("suite {}\n", s.suite);
            for p in &s.properties {
                let mark = if p.failed == 0 { "ok  " } else { "FAIL" };
                out += &format!(
                    "  {mark} {:<40} {:>4}/{:<4} worst {:.2e} {:>7.2}s\n",
                    p.name,
                    p.passed,
                    p.trials,
                    p.worst_residual,
                    p.elapsed.as_secs_f64()
                );
                for f in &p.failures {
                    out += &format!("       seed {} trial {}: {}\n", f.seed, f.trial, f.detail);
                }
            }
        }
        for u in &self.unsupported {
            out += &format!("unsupported {u}\n");
        }
        if !self.result.is_null() {
            out += &serde_json::to_string_pretty(&self.result).expect("json values serialize");
            out.push('\n');
        }
        out += &format!("elapsed {:.3}s\n", self.elapsed.as_secs_f64());
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json() + "\n",
            Format::Text => self.to_text(),
        }
    }
}
