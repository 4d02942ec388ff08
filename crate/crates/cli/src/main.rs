mod catalog;
mod config;
mod experiments;
mod failure;
mod replay;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::config::{ExperimentConfig, Overrides};
use crate::failure::Failure;

/// Seeded experiments on centralizers between Schatten classes.
#[derive(Parser)]
#[command(name = "centralab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Comma-separated dimensions, e.g. `8,16,32`.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        /// Output directory; falls back to $CENTRALAB_OUT, then ./centralab-out.
        #[arg(long)]
        output: Option<String>,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
    /// List built-in symbols, spec constructors, operations and experiments.
    List,
    /// Re-evaluate the witnesses stored in a JSON artifact.
    Replay {
        file: PathBuf,
        #[arg(long)]
        entry: Option<usize>,
    },
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::io(format!("cannot serialize output: {e}")))?;
    // a closed pipe on stdout is the reader's choice, not a failure
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            config,
            seed,
            samples,
            dims,
            output,
        } => {
            let overrides = Overrides {
                seed,
                samples,
                dims,
                output,
            };
            let resolved = ExperimentConfig::load(&config)?.apply(&overrides).resolve()?;
            print_json(&experiments::run(&resolved)?)
        }
        Command::Validate { config } => {
            let resolved = ExperimentConfig::load(&config)?.resolve()?;
            print_json(&serde_json::json!({
                "status": "ok",
                "experiment": resolved.config.experiment,
                "config_hash": resolved.hash,
            }))
        }
        Command::List => {
            let _ = write!(std::io::stdout().lock(), "{}", catalog::catalog().table());
            Ok(())
        }
        Command::Replay { file, entry } => {
            let report = replay::replay(&file, entry)?;
            print_json(&report)?;
            if report.status == "ok" {
                Ok(())
            } else {
                Err(Failure::replay("replayed values differ from the recorded ones"))
            }
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.to_json());
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
