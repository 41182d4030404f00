//! `minvol`: verification suites and computations for minimal-volume unit
//! vector fields, with JSON or CSV reports.

mod args;
mod commands;
mod error;
mod report;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::calibrations::CalibrationsCommand;
use commands::field::FieldCommand;
use commands::flow::FlowCommand;
use commands::structural::StructuralArgs;
use error::{CliError, CliResult};
use report::Format;

#[derive(Parser, Debug)]
#[command(name = "minvol", version, about)]
struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite-difference check of the structure equations on T¹M.
    VerifyStructural(StructuralArgs),
    /// Invariant calibrations: families, comass and cohomology.
    #[command(subcommand)]
    Calibrations(CalibrationsCommand),
    /// Volume, calibration and classification of a unit vector field.
    #[command(subcommand)]
    Field(FieldCommand),
    /// The geodesic flow on T¹M.
    #[command(subcommand)]
    Flow(FlowCommand),
}

fn run(cli: &Cli) -> CliResult<bool> {
    let report = match &cli.command {
        Command::VerifyStructural(args) => commands::structural::run(args, cli.seed)?,
        Command::Calibrations(cmd) => commands::calibrations::run(cmd, cli.seed)?,
        Command::Field(cmd) => commands::field::run(cmd, cli.seed)?,
        Command::Flow(cmd) => commands::flow::run(cmd, cli.seed)?,
    };
    let text = report.render(cli.format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
        }
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
