//! `confdec`: reproducible runs of the conformal-fluctuation decoherence
//! model. Every run writes `manifest.json` next to its outputs; `replay`
//! re-runs a manifest.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 numerical or
//! statistical failure.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

use commands::{bound, evolve, field, kernel, mc};
use config::{resolve, GlobalArgs};
use error::CliResult;

#[derive(Debug, Parser)]
#[command(
    name = "confdec",
    version,
    about = "Decoherence from conformal spacetime fluctuations"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the fluctuation field and check its correlation structure.
    Field(field::FieldArgs),
    /// Monte Carlo estimate of the coherence factor and its decay rate.
    Mc(mc::McArgs),
    /// Decoherence-factor curves and general-kernel comparison tables.
    Kernel(kernel::KernelArgs),
    /// Evolve a density matrix under the master equation.
    Evolve(evolve::EvolveArgs),
    /// Lower bound on the cut-off scale from interferometer contrast.
    Bound(bound::BoundArgs),
    /// Re-run the command recorded in a manifest.
    Replay { manifest: PathBuf },
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Field(a) => {
            let (s, c) = resolve("field", g, a)?;
            commands::execute("field", &s, &c, field::run)
        }
        Command::Mc(a) => {
            let (s, c) = resolve("mc", g, a)?;
            commands::execute("mc", &s, &c, mc::run)
        }
        Command::Kernel(a) => {
            let (s, c) = resolve("kernel", g, a)?;
            commands::execute("kernel", &s, &c, kernel::run)
        }
        Command::Evolve(a) => {
            let (s, c) = resolve("evolve", g, a)?;
            commands::execute("evolve", &s, &c, evolve::run)
        }
        Command::Bound(a) => {
            let (s, c) = resolve("bound", g, a)?;
            commands::execute("bound", &s, &c, bound::run)
        }
        Command::Replay { manifest } => {
            let out = match &g.out {
                Some(out) => out.clone(),
                None => manifest
                    .parent()
                    .map_or_else(|| PathBuf::from("replay"), |p| p.join("replay")),
            };
            commands::replay(manifest, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("confdec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
