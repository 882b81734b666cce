//! `heatlab <subcommand> [--key value]...`
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 for
//! invalid parameters, 3 when a resource budget would be exceeded.

mod commands;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use commands::chain::{couple, mix, CoupleArgs, MixArgs};
use commands::grid::{calculus, fourier, CalculusArgs, FourierArgs};
use commands::heat::{equilibrium, equivalence, heat, EquilibriumArgs, EquivalenceArgs, HeatArgs};
use commands::martingale::{martingale, MartingaleArgs};
use error::CliError;
use report::{OutputArgs, Run, RunReport};

#[derive(Debug, Parser)]
#[command(
    name = "heatlab",
    version,
    about = "Cyclic chains, discrete heat flow and exact reverse martingales"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact n-step gaps of the cyclic chain against the mixing bounds
    Mix {
        #[command(flatten)]
        args: MixArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact and simulated meeting-time tails of two coupled chains
    Couple {
        #[command(flatten)]
        args: CoupleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact reverse-martingale construction and its verification
    Martingale {
        #[command(flatten)]
        args: MartingaleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Discrete calculus identities on random grid functions
    Calculus {
        #[command(flatten)]
        args: CalculusArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fourier coefficients, coefficient identities and decay of a preset
    Fourier {
        #[command(flatten)]
        args: FourierArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Explicit heat stepping compared with the classical solution
    Heat {
        #[command(flatten)]
        args: HeatArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Distance of the heat flow to the normalised mean
    Equilibrium {
        #[command(flatten)]
        args: EquilibriumArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Heat stepping at weight 1/3 against the cyclic chain
    Equivalence {
        #[command(flatten)]
        args: EquivalenceArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// List the named initial conditions
    Presets {
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Serialize)]
struct NoConfig {}

fn run(cmd: &Command) -> Result<RunReport, CliError> {
    match cmd {
        Command::Mix { args, out } => mix(args, out),
        Command::Couple { args, out } => couple(args, out),
        Command::Martingale { args, out } => martingale(args, out),
        Command::Calculus { args, out } => calculus(args, out),
        Command::Fourier { args, out } => fourier(args, out),
        Command::Heat { args, out } => heat(args, out),
        Command::Equilibrium { args, out } => equilibrium(args, out),
        Command::Equivalence { args, out } => equivalence(args, out),
        Command::Presets { out } => {
            let mut run = Run::new("presets", out, &NoConfig {});
            run.result("presets", heatlab_core::presets::presets());
            run.finish()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("report serialises");
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
