mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Flags, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "gabor-tp", version, about = "Gabor frames with totally positive windows and exponential B-splines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Window samples on a grid and, with --zak, the periodized discrete window
    Window,
    /// Compactly supported dual from a finite pre-Gramian section
    Dual,
    /// Distance of section duals to a large-L reference
    Converge,
    /// Frame algorithm and the three Schulz variants
    Schulz,
    /// Analysis and synthesis of a signal file
    Dgt,
    /// Wexler-Raz residual, section bounds and round-trip checks
    Verify,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(gabor_tp::Error),
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) if e.is_regime() => 3,
            CliError::Lib(_) => 2,
            CliError::Failed(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Failed(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<gabor_tp::Error> for CliError {
    fn from(e: gabor_tp::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(gabor_tp::Error::Io(e))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let name = match cli.command {
        Command::Window => "window",
        Command::Dual => "dual",
        Command::Converge => "converge",
        Command::Schulz => "schulz",
        Command::Dgt => "dgt",
        Command::Verify => "verify",
    };
    let result = RunConfig::resolve(name, &cli.flags).and_then(|run| match cli.command {
        Command::Window => commands::window(&run),
        Command::Dual => commands::dual(&run),
        Command::Converge => commands::converge(&run),
        Command::Schulz => commands::schulz(&run),
        Command::Dgt => commands::dgt(&run),
        Command::Verify => commands::verify(&run),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
