//! Batch command-line front end. All numerical work lives in the library;
//! this binary parses arguments, loads the JSON run configuration, and maps
//! errors to exit codes: 0 success, 1 solver failure, 2 invariant or
//! cross-check inconsistency, 3 configuration error. Failures also print a
//! machine-readable error JSON on stderr.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pcurve::cli::{run, Command};
use pcurve::config::RunConfig;
use pcurve::Error;

#[derive(Parser)]
#[command(
    name = "pcurve",
    version,
    about = "Principal eigenvalue curves, maximum/comparison principles, and explicit bounds for coupled p-Laplacian systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Path to the JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory the artifacts are written to.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Override the configuration's random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for grid sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the curve constant and the normalized eigenpair.
    Eigencurve,
    /// Solve the inhomogeneous system for the configured couple and data.
    Solve,
    /// Classify the configured couple against the principal curve.
    Classify,
    /// Verify the weak/strong maximum principles on random data.
    VerifyMp,
    /// Verify the weak/strong comparison principles on ordered data.
    VerifyCp,
    /// Construct a certified counterexample outside the admissible region.
    Violate,
    /// Evaluate the ABP constants, the lower bound, and the threshold.
    Bounds,
    /// Label a (lambda, mu) grid with region classes and verdicts.
    Sweep,
    /// Track the curve constant and lower bound over a shrinking family.
    Shrink,
}

impl From<&Cmd> for Command {
    fn from(c: &Cmd) -> Command {
        match c {
            Cmd::Eigencurve => Command::Eigencurve,
            Cmd::Solve => Command::Solve,
            Cmd::Classify => Command::Classify,
            Cmd::VerifyMp => Command::VerifyMp,
            Cmd::VerifyCp => Command::VerifyCp,
            Cmd::Violate => Command::Violate,
            Cmd::Bounds => Command::Bounds,
            Cmd::Sweep => Command::Sweep,
            Cmd::Shrink => Command::Shrink,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(message) => {
            println!("{message}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = exit_code(&err);
            eprintln!(
                "{}",
                serde_json::json!({
                    "error": { "kind": error_kind(&err), "message": err.to_string() },
                    "exit_code": code,
                })
            );
            ExitCode::from(code)
        }
    }
}

fn execute(cli: &Cli) -> pcurve::Result<String> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config <path> is required".into()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut config = RunConfig::from_json(&text)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let summary = run((&cli.command).into(), &config, &cli.out, cli.threads)?;
    let mut lines = vec![summary.message];
    for artifact in &summary.artifacts {
        lines.push(format!("wrote {}", artifact.display()));
    }
    Ok(lines.join("\n"))
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NonConvergence { .. } | Error::GrowthCap { .. } => 1,
        Error::Inconsistency(_) => 2,
        Error::Config(_) | Error::InvalidParameter(_) | Error::Io(_) | Error::Json(_) => 3,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::NonConvergence { .. } => "solver_failure",
        Error::GrowthCap { .. } => "growth_cap",
        Error::Inconsistency(_) => "inconsistency",
        Error::Config(_) => "config",
        Error::InvalidParameter(_) => "invalid_parameter",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}
