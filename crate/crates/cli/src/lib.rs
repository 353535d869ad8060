//! Command-line front end for signlab.

pub mod config;
pub mod finite;
pub mod involution;
pub mod output;
pub mod roots_cmd;
pub mod suite;

use clap::{Parser, Subcommand};

use config::{ConfigError, Options, RunConfig};
use finite::FiniteCommand;
use output::emit;
use roots_cmd::RootsCommand;
use suite::SuiteName;

#[derive(Debug, Parser)]
#[command(
    name = "signlab",
    version,
    about = "Twisted signs of finite groups and parabolic root data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root-datum hypotheses and chamber certificates
    Roots {
        #[command(subcommand)]
        command: RootsCommand,
        #[command(flatten)]
        options: Options,
    },
    /// Finite matrix groups, character tables and signs
    Finite {
        #[command(subcommand)]
        command: FiniteCommand,
        #[command(flatten)]
        options: Options,
    },
    /// Batch runs that emit one summary document
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
        #[command(flatten)]
        options: Options,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Runs one command and returns its exit code. Output is written only once the
/// command has finished, so a failed run leaves no artifact behind.
pub fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_ASSERTION,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                EXIT_CONFIG
            } else {
                EXIT_ASSERTION
            }
        }
    }
}

type Job = Box<dyn FnOnce(&RunConfig) -> anyhow::Result<output::Report>>;

fn execute(cli: Cli) -> anyhow::Result<bool> {
    let (options, job): (Options, Job) = match cli.command {
        Command::Roots { command, options } => {
            (options, Box::new(move |c| roots_cmd::run(command, c)))
        }
        Command::Finite { command, options } => {
            (options, Box::new(move |c| finite::run(command, c)))
        }
        Command::Suite { name, options } => (options, Box::new(move |c| suite::run(name, c))),
    };
    let cfg = RunConfig::resolve(&options)?;
    let report = job(&cfg)?;
    let text = report.render(cfg.format)?;
    emit(&text, cfg.out.as_deref())?;
    Ok(report.ok)
}
