//! `plasmon`: dispersion, amplitude, semiclassical and propagator tables for a
//! delta-bound charged layer, plus the bundled self-check suite.
//!
//! Exit codes: 0 on success, 1 on usage, configuration or domain errors (and
//! failed checks), 2 when a requested root could not be found.

mod commands;
mod config;
mod emit;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use plasmon_core::Error;

use commands::{AmplitudeArgs, CheckArgs, DispersionArgs, Outcome, PropagatorArgs, SemiclassicalArgs};
use config::{GlobalArgs, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "plasmon", version, about = "Surface-plasmon dispersion of a delta-bound charged layer")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plasmon energy over a grid of wave numbers
    Dispersion(DispersionArgs),
    /// Amplitude profile at the root for one wave number
    Amplitude(AmplitudeArgs),
    /// Exact roots against the leading and corrected square-root laws
    Semiclassical(SemiclassicalArgs),
    /// Samples of the bound-state propagator
    Propagator(PropagatorArgs),
    /// Run the self-check suite
    Check(CheckArgs),
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let cfg = RunConfig::resolve(&cli.global)?;
    eprintln!("effective config: {}", serde_json::to_string(&cfg)?);
    eprintln!("command: {:?}", cli.command);
    let out = io::stdout().lock();
    match &cli.command {
        Command::Dispersion(a) => commands::dispersion(&cfg, a, out),
        Command::Amplitude(a) => commands::amplitude(&cfg, a, out),
        Command::Semiclassical(a) => commands::semiclassical(&cfg, a, out),
        Command::Propagator(a) => commands::propagator(&cfg, a, out),
        Command::Check(a) => commands::check(&cfg, a, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let code = match run(&cli) {
        Ok(o) if o.not_found => 2,
        Ok(o) if o.row_errors || o.failed_checks => 1,
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::NotFound { .. }) => 2,
                _ => 1,
            }
        }
    };
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
