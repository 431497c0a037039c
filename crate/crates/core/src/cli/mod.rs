//! `tikhonov-lab`: config-driven runs, comparisons and sweeps.
//!
//! Exit status: 0 on success, 1 for IO errors, 2 for configuration or usage
//! errors, 3 when an integration fails (partial artifacts are still written).

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgAction, Parser, Subcommand};

pub use commands::CliError;
pub use config::{ConfigError, ExperimentConfig, Resolved};

#[derive(Debug, Parser)]
#[command(name = "tikhonov-lab", version, about = "Inertial dynamics with Hessian damping and Tikhonov regularization")]
pub struct Cli {
    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Accepted for compatibility; nothing here is random.
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    pub seedless: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one configuration.
    Run {
        /// TOML experiment file.
        config: PathBuf,
    },
    /// Zero schedule plus `t^{-γ}` for each γ.
    Compare {
        /// TOML experiment file.
        config: PathBuf,
        /// Comma-separated exponents, e.g. `1.1,1.5,1.9`.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        gammas: Vec<f64>,
    },
    /// Cartesian product over α, β and γ.
    Sweep {
        /// TOML experiment file.
        config: PathBuf,
        /// α values; defaults to the config's.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        alpha: Vec<f64>,
        /// β values; defaults to the config's.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        beta: Vec<f64>,
        /// Power-schedule exponents; defaults to the config's schedule.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        gamma: Vec<f64>,
    },
    /// Print the hypothesis report for the configured schedule.
    CheckSchedule {
        /// TOML experiment file.
        config: PathBuf,
    },
}

/// Parse `args` (including the program name) and run; returns the exit
/// status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("tikhonov-lab: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Run { config } => {
            let dir = commands::run(&commands::load(config, out)?)?;
            eprintln!("wrote {}", dir.display());
        }
        Command::Compare { config, gammas } => {
            let dir = commands::compare(&commands::load(config, out)?, gammas)?;
            eprintln!("wrote {}", dir.display());
        }
        Command::Sweep { config, alpha, beta, gamma } => {
            let dir = commands::sweep(&commands::load(config, out)?, alpha, beta, gamma)?;
            eprintln!("wrote {}", dir.display());
        }
        Command::CheckSchedule { config } => {
            println!("{}", commands::check_schedule(&commands::load(config, out)?)?);
        }
    }
    Ok(())
}
