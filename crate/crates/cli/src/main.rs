use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ipro_cli::commands::{cmd_metrics, cmd_run, cmd_serve_oracle, cmd_verify};
use ipro_cli::config::{OracleConfig, RunConfig};
use ipro_cli::files::{parse_vector, read_points};
use ipro_cli::CliError;
use ipro_core::metrics::DEFAULT_UTILITY_COUNT;

/// Anytime Pareto front construction with pluggable oracles.
#[derive(Parser)]
#[command(name = "ipro", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a search and write iterations.jsonl, front.csv and summary.json.
    /// Exits 0 when the bound reached the tolerance, 2 when the budget ran out.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the configured oracle: exact-weak, exact-approx,
        /// noisy:<p> or external:<command>.
        #[arg(long)]
        oracle: Option<String>,
    },
    /// Audit a finished run against the true front. Exits 3 on a failed audit.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// True front (CSV or JSON); defaults to enumerating the environment.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Hypervolume, and ε / maximum utility loss when a truth set is given.
    Metrics {
        #[arg(long)]
        front: PathBuf,
        /// Reference point, e.g. `0,-50`.
        #[arg(long = "ref", allow_hyphen_values = true)]
        reference: String,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_UTILITY_COUNT)]
        utilities: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Serve the configured exact oracle over stdio.
    #[command(hide = true)]
    ServeOracle {
        #[arg(long)]
        config: PathBuf,
    },
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Parse(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run { config, oracle } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(flag) = oracle {
                cfg.oracle = OracleConfig::from_flag(&flag)?;
                cfg.validate()?;
            }
            let summary = cmd_run(&cfg)?;
            print_json(&summary)?;
            Ok(summary.exit_code())
        }
        Command::Verify { config, truth } => {
            let cfg = RunConfig::load(&config)?;
            let report = cmd_verify(&cfg, truth.as_deref())?;
            print_json(&report)?;
            Ok(report.exit_code())
        }
        Command::Metrics {
            front,
            reference,
            truth,
            utilities,
            seed,
        } => {
            let front = read_points(&front)?;
            let reference = parse_vector(&reference)?;
            let truth = truth.map(|t| read_points(&t)).transpose()?;
            let report = cmd_metrics(&front, &reference, truth.as_deref(), utilities, seed)?;
            print_json(&report)?;
            Ok(0)
        }
        Command::ServeOracle { config } => {
            cmd_serve_oracle(&RunConfig::load(&config)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
