//! Command-line laboratory for two-arm interferometer wave-packet
//! experiments.
//!
//! Six subcommands cover the workflow: `design` solves for amplitude sets,
//! `scan` sweeps packet widths, `compare` puts the exact density next to
//! its wide-packet asymptote, `density` tabulates one port, `infer` turns a
//! peak shift into a naive dwell time, and `larmor` reads the spin clock.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 domain error
//! (singular design target, dark port, delay pole). Output is
//! deterministic: identical inputs produce byte-identical bytes on stdout
//! or in files, independent of the worker-thread count.

mod commands;
mod config;
mod emit;
mod error;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{compare, density, design, infer, larmor, scan};
use crate::config::{prefer, FileConfig};
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "mzi-lab",
    version,
    about = "Numerical laboratory for a Gaussian packet in a two-arm interferometer",
    disable_help_subcommand = true
)]
struct Cli {
    /// Flat JSON config file; explicit flags take precedence over its keys.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Output format, where the command offers a choice (text, csv, json).
    #[arg(long, global = true, value_name = "FMT")]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for path amplitudes that put the wide-packet peak at z.
    Design(design::DesignArgs),
    /// Sweep the bright-port density across a packet-width ladder (CSV).
    Scan(scan::ScanArgs),
    /// Tabulate exact, asymptotic and free densities on one grid (CSV).
    Compare(compare::CompareArgs),
    /// Tabulate one detector's density (CSV).
    Density(density::DensityArgs),
    /// Infer the naive time inside a region from a peak shift (JSON).
    Infer(infer::InferArgs),
    /// Read the postselected spin-clock precession angle.
    Larmor(larmor::LarmorArgs),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let output = prefer(cli.output.clone(), file.output.clone());
    let format = prefer(cli.format.clone(), file.format.clone());
    let output = output.as_deref();
    let format = format.as_deref();
    match &cli.command {
        Command::Design(args) => design::run(args, &file, output, format),
        Command::Scan(args) => scan::run(args, &file, output, format),
        Command::Compare(args) => compare::run(args, &file, output, format),
        Command::Density(args) => density::run(args, &file, output, format),
        Command::Infer(args) => infer::run(args, &file, output, format),
        Command::Larmor(args) => larmor::run(args, &file, output, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successful runs; everything else
            // is a usage error.
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
