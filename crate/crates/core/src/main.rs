use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use cartograph::cli::{self, parse_epsilon, parse_grid, CliError, Overrides, RunConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cartograph", version, about = "Cartographic invariants of semitoric systems")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the region described by a TOML config and write its outputs.
    Run {
        config: PathBuf,
        /// Grid size, `NX` or `NXxNY`.
        #[arg(long)]
        grid: Option<String>,
        /// Absolute and relative quadrature tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Monte Carlo seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Cut signs, e.g. `+,-`.
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<String>,
    },
    /// Test two region documents for equivalence.
    Compare { a: PathBuf, b: PathBuf },
}

fn emit(text: &str) -> Result<(), CliError> {
    writeln!(std::io::stdout().lock(), "{text}").map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn execute(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Run {
            config,
            grid,
            tol,
            seed,
            epsilon,
        } => {
            let mut cfg = RunConfig::load(&config)?;
            cfg.apply(&Overrides {
                grid: grid.as_deref().map(parse_grid).transpose()?,
                tol,
                seed,
                epsilon: epsilon.as_deref().map(parse_epsilon).transpose()?,
            });
            let report = cli::run(&cfg)?;
            emit(&serde_json::to_string_pretty(&report).expect("report serializes"))?;
            Ok(0)
        }
        Command::Compare { a, b } => {
            let c = cli::compare(&a, &b)?;
            emit(&serde_json::to_string_pretty(&c).expect("comparison serializes"))?;
            Ok(if c.equivalent { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}
