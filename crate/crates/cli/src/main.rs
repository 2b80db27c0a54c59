//! `partca`: cellular automata on finitely generated abelian groups,
//! acting on partially defined configurations.

mod io;
mod query;
mod simulate;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::io::CliError;
use crate::query::QueryWhat;
use crate::verify::Fault;

/// Which transition semantics a simulation step uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Apply the rule only where the whole window is present.
    Coarse,
    /// Apply the rule wherever the outcome is forced by the data.
    Fine,
    /// Synchronous step on an everywhere-defined input (finite groups).
    Global,
}

#[derive(Parser)]
#[command(
    name = "partca",
    version,
    about = "Cellular automata on finitely generated abelian groups, acting on partial configurations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate a transition mode, printing one configuration per line
    Simulate {
        /// Automaton description (JSON)
        #[arg(long)]
        automaton: PathBuf,
        /// Starting configuration (JSON)
        #[arg(long)]
        config: PathBuf,
        /// Transition semantics
        #[arg(long, value_enum)]
        mode: Mode,
        /// How many steps to iterate
        #[arg(long, default_value_t = 1)]
        steps: u32,
        /// Inclusive ranges for the infinite axes, comma-separated,
        /// e.g. "-10..10"; finite axes are always full
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Run verification suites against an automaton
    Verify {
        /// Automaton description (JSON)
        #[arg(long)]
        automaton: PathBuf,
        /// Comma-separated subset of: laws, order, transitions, kan
        #[arg(long, default_value = "laws,order,transitions,kan")]
        suites: String,
        /// Visit budget for the exhaustive extension search
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Seed for the randomized suites
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Deliberately break the lab candidates to exercise the
        /// failure exit path
        #[arg(long, value_enum)]
        inject_fault: Option<Fault>,
    },
    /// Report the interior or the forced cells of a configuration
    Query {
        /// Automaton description (JSON)
        #[arg(long)]
        automaton: PathBuf,
        /// Configuration (JSON)
        #[arg(long)]
        config: PathBuf,
        /// Which set to report
        #[arg(long, value_enum)]
        what: QueryWhat,
        /// Inclusive ranges for the infinite axes, comma-separated
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            automaton,
            config,
            mode,
            steps,
            window,
        } => simulate::run(&simulate::SimulateArgs {
            automaton,
            config,
            mode,
            steps,
            window,
        }),
        Command::Verify {
            automaton,
            suites,
            budget,
            seed,
            inject_fault,
        } => verify::run(&verify::VerifyArgs {
            automaton,
            suites,
            budget,
            seed,
            fault: inject_fault,
        }),
        Command::Query {
            automaton,
            config,
            what,
            window,
        } => query::run(&query::QueryArgs {
            automaton,
            config,
            what,
            window,
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(message)) => {
            eprintln!("{message}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
