//! `matricial`: reads a job description as JSON, runs the requested engines
//! and checks, and reports the moments.
//!
//! Exit codes: 0 when every engine agrees and every check passes, 1 on a
//! disagreement or failed check, 2 on a bad config or an unsupported request.

mod config;
mod run;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use matricial::Precision;
use num::rational::BigRational;

use config::{ConfigError, Job, Overrides};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "matricial",
    version,
    about = "Moments of strongly matricially free convolutions"
)]
struct Args {
    /// Job config file; read from stdin when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Highest moment order (at most 12).
    #[arg(long)]
    order: Option<usize>,
    /// Comma-separated engines: partition, fock, analytic.
    #[arg(long)]
    engines: Option<String>,
    /// rational or float.
    #[arg(long)]
    precision: Option<String>,
    /// Comma-separated checks: axioms, sum_inverse, compressed_inverse, uniqueness.
    #[arg(long)]
    checks: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    out: OutputFormat,
    /// Height above the real axis for density sampling.
    #[arg(long)]
    density_eps: Option<f64>,
    /// Write the Fock basis and operator tables to this file.
    #[arg(long)]
    fock_dump: Option<PathBuf>,
}

fn load(args: &Args) -> Result<Job, ConfigError> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| ConfigError(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    let overrides = Overrides {
        order: args.order,
        engines: args.engines.clone(),
        precision: args.precision.clone(),
        checks: args.checks.clone(),
        density_eps: args.density_eps,
    };
    Job::parse(&text, &overrides)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = load(&args).and_then(|job| match job.precision {
        Precision::Rational => run::run::<BigRational>(&job, args.fock_dump.as_deref()),
        Precision::Float => run::run::<f64>(&job, args.fock_dump.as_deref()),
    });
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for d in &report.diagnostics {
        eprintln!("{d}");
    }
    let body = match args.out {
        OutputFormat::Json => {
            serde_json::to_string_pretty(&report.json).expect("report serializes") + "\n"
        }
        OutputFormat::Csv => report.csv,
    };
    // a closed pipe downstream is not our failure
    let _ = std::io::stdout().write_all(body.as_bytes());
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
