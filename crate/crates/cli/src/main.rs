//! `obslab` — batch experiment runner.
//!
//! Exit codes: 0 all assertions pass, 1 assertion failure, 2 config error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use obslab_cli::{resolve_threads, run, write_outputs, CliError, Experiment, Kind};

#[derive(Parser)]
#[command(
    name = "obslab",
    version,
    about = "Observability laboratory experiment runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Thickness and geometric-control checks on a control set
    Geometry(RunArgs),
    /// Lifted-lattice gap decompositions over random quasimomenta
    Decompose(RunArgs),
    /// θ-sweep of observability Gramian eigenvalues
    ObsSweep(RunArgs),
    /// HUM null-control synthesis and verification
    Hum(RunArgs),
    /// Gaussian-in-clearing decay of the observability quotient
    Counterexample(RunArgs),
    /// Closed-form ball integrals against the quadrature oracle
    GramOracle(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config with the kind-specific parameter block
    #[arg(long)]
    config: PathBuf,
    /// Output directory for report.json and CSV artifacts
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for all randomized draws (default 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker cap; falls back to OBSLAB_THREADS, then the host parallelism
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Geometry(a) => (Kind::Geometry, a),
        Command::Decompose(a) => (Kind::Decompose, a),
        Command::ObsSweep(a) => (Kind::ObsSweep, a),
        Command::Hum(a) => (Kind::Hum, a),
        Command::Counterexample(a) => (Kind::Counterexample, a),
        Command::GramOracle(a) => (Kind::GramOracle, a),
    };
    match execute(kind, args) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("obslab: {e}");
            match e {
                CliError::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn execute(kind: Kind, args: &RunArgs) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let exp = Experiment::parse(kind, &text)?;
    let violations = exp.validate();
    if !violations.is_empty() {
        return Err(CliError::Config(violations.join("; ")));
    }
    let seed = args.seed.unwrap_or(0);
    let threads = resolve_threads(args.threads);
    let output = run(&exp, seed, threads)?;
    match &args.out {
        Some(dir) => write_outputs(&output, dir)?,
        None => println!(
            "{}",
            serde_json::to_string_pretty(&output.report)
                .map_err(|e| CliError::Run(e.to_string()))?
        ),
    }
    for a in &output.report.assertions {
        eprintln!(
            "[{}] {}: {}",
            if a.passed { "pass" } else { "FAIL" },
            a.name,
            a.detail
        );
    }
    Ok(output.report.all_passed())
}
