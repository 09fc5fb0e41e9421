//! Command-line front end: argument parsing, JSON documents, DOT output and
//! the command implementations behind the `unchained` binary.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use unchained::{Limits, DEFAULT_CAP};

pub mod commands;
pub mod dot;
pub mod io;
pub mod selftest;

pub const CAP_ENV: &str = "UNCHAINED_CAP";

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Lib(#[from] unchained::Error),
    #[error("{0}")]
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Parse(_) => 4,
            Failure::Lib(unchained::Error::SizeCapExceeded { .. }) => 3,
            Failure::Lib(_) | Failure::Verification(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            4 => "parse",
            3 => "cap-exceeded",
            _ => "verification",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "format": io::FORMAT_TAG,
            "error": { "kind": self.kind(), "exit_code": self.exit_code(), "message": self.to_string() },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    Height,
    Quicksort,
    WfRelation,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Decide whether a coalgebra is recursive; prints an evaluation order
    /// or a cycle.
    CheckRecursive { coalgebra: PathBuf },
    /// Evaluate the unique map from a recursive coalgebra into an algebra.
    Hylo { coalgebra: PathBuf, algebra: PathBuf },
    /// Build the truncation A_n of the initial algebra.
    Initial {
        #[arg(long)]
        bound: usize,
        /// List the term represented by each element.
        #[arg(long)]
        emit_terms: bool,
        /// One coalgebra per isomorphism class, and a cover of each hom-set.
        #[arg(long)]
        compact: bool,
    },
    /// Build the initial chain and analyze each stage.
    Chain {
        #[arg(long)]
        steps: usize,
    },
    /// Compare the colimit of the generated coalgebras over F A_n with F A_n.
    IterateCheck {
        #[arg(long)]
        bound: usize,
        /// Largest |P| in the slice over F A_n.
        #[arg(long)]
        slice: usize,
        /// Sample this many slice objects, using --seed.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long)]
        compact: bool,
    },
    /// Colimit of a diagram of finite sets.
    Colimit { diagram: PathBuf },
    /// Built-in worked examples.
    Examples {
        name: ExampleName,
        /// Comma-separated list for quicksort.
        #[arg(long)]
        input: Option<String>,
    },
    /// Run the invariant suite.
    Selftest,
}

/// Everything a run depends on.
#[derive(Debug, Clone, Parser)]
#[command(name = "unchained", version, about = "Initial algebras as colimits of finite recursive coalgebras")]
pub struct RunConfig {
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Size cap for materialized sets; defaults to $UNCHAINED_CAP or 200000.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Seed for sampled and randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Built-in name, inline JSON, or path to a functor document.
    #[arg(long, global = true, default_value = "cherry")]
    pub functor: String,
    #[command(subcommand)]
    pub command: Command,
}

impl RunConfig {
    /// The cap from `--cap`, else the environment value, else the default.
    pub fn limits(&self, env: Option<&str>) -> Result<Limits, Failure> {
        let cap = match (self.cap, env) {
            (Some(c), _) => c,
            (None, Some(v)) => v.trim().parse().map_err(|_| Failure::Parse(format!("{CAP_ENV}={v} is not a number")))?,
            (None, None) => DEFAULT_CAP,
        };
        if cap == 0 {
            return Err(Failure::Parse("the cap must be positive".into()));
        }
        Ok(Limits { cap })
    }
}

/// Output of a run. A report may come with a non-zero exit code when a
/// check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(cfg: &RunConfig, env_cap: Option<&str>) -> Outcome {
    let res = cfg.limits(env_cap).and_then(|limits| commands::dispatch(cfg, &limits));
    match res {
        Ok(report) => Outcome { exit: report.exit, stdout: report.body, stderr: String::new() },
        Err(f) => Outcome { exit: f.exit_code(), stdout: String::new(), stderr: io::to_pretty(&f.to_json()) },
    }
}
