use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;

use super::commands::{check_axioms, classify_element, equiv, kgroup, theta, Relation, Which};
use super::{ExitCode, Format, Report, RunConfig};
use crate::error::{Error, Result};
use crate::model::{AlgebraSpec, Element};
use crate::tolerance::Tolerances;

#[derive(Debug, Parser)]
#[command(name = "amou-k", version, about = "K-theory of absolute matrix order unit spaces on computable models")]
pub struct Cli {
    /// `fd:d1,d2,...`, `circle:dim:grid`, or inline JSON.
    #[arg(long, global = true, default_value = "fd:2")]
    pub algebra: String,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, global = true)]
    pub tol_pred: Option<f64>,
    #[arg(long, global = true)]
    pub tol_path: Option<f64>,
    #[arg(long, global = true)]
    pub tol_bisect: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FormatArg {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the model and equivalence property suites.
    CheckAxioms,
    /// Classify an element and report |v|, |v*| and its norm.
    Classify {
        #[arg(long)]
        element: PathBuf,
    },
    /// Compute K₀, K₁ or K as an ordered group.
    Kgroup {
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Decide an equivalence between two elements.
    Equiv {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
        #[arg(long, value_enum)]
        relation: Relation,
    },
    /// Split a K class into its K₀ and K₁ components.
    Theta {
        /// JSON file `{"plus": element, "minus": element}`.
        #[arg(long)]
        x: PathBuf,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairFile {
    plus: Element,
    minus: Element,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::SpecParse(format!("{}: {e}", path.display())))
}

fn read_element(path: &Path) -> Result<Element> {
    Element::from_json(&read(path)?).map_err(|e| Error::SpecParse(format!("{}: {e}", path.display())))
}

impl Cli {
    pub fn config(&self) -> RunConfig {
        let d = Tolerances::default();
        RunConfig {
            seed: self.seed,
            trials: self.trials,
            tol: Tolerances {
                pred: self.tol_pred.unwrap_or(d.pred),
                path: self.tol_path.unwrap_or(d.path),
                bisect: self.tol_bisect.unwrap_or(d.bisect),
                ..d
            },
        }
    }

    pub fn format(&self) -> Format {
        match self.format {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        }
    }

    pub fn execute(&self) -> Result<Report> {
        let alg = AlgebraSpec::parse(&self.algebra)?;
        let cfg = self.config();
        match &self.command {
            Command::CheckAxioms => check_axioms(&alg, &cfg),
            Command::Classify { element } => classify_element(&alg, &read_element(element)?, &cfg),
            Command::Kgroup { which } => kgroup(&alg, *which, &cfg),
            Command::Equiv { u, v, relation } => equiv(&alg, &read_element(u)?, &read_element(v)?, *relation, &cfg),
            Command::Theta { x } => {
                let pair: PairFile = serde_json::from_str(&read(x)?)
                    .map_err(|e| Error::SpecParse(format!("{}: {e}", x.display())))?;
                theta(&alg, &pair.plus, &pair.minus, &cfg)
            }
        }
    }
}

/// Parses `args`, runs the command, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::InputError as i32 } else { 0 };
        }
    };
    let report = match cli.execute() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::of_error(&e) as i32;
        }
    };
    let text = report.render(cli.format());
    let written = match &cli.out {
        Some(path) => fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return ExitCode::InputError as i32;
    }
    report.exit_code() as i32
}
