//! `frachardy` command-line front end.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config
//! error, 3 internal error.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "frachardy", version, about = "Numerical checks of fractional Hardy-type inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: RunConfig,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Evaluate one norm of a stored field.
    Norm,
    /// Littlewood-Paley decomposition summary of a stored field.
    Lp,
    /// Evaluate one Hardy-type quotient on a stored field.
    HardyCheck,
    /// Dyadic Schur test: closed-form row sums and random sequences.
    SchurCheck,
    /// Evaluate the Stein-Weiss quotient on a stored field.
    SteinWeissCheck,
    /// Search trial families for the largest quotient.
    EstimateConstant,
    /// Evaluate one identity across a parameter range, CSV out.
    Sweep,
    /// Run a named suite over the configured corpus.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Lp => "lp",
            Command::HardyCheck => "hardy-check",
            Command::SchurCheck => "schur-check",
            Command::SteinWeissCheck => "stein-weiss-check",
            Command::EstimateConstant => "estimate-constant",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
        }
    }

    fn parse(s: &str) -> Option<Command> {
        [
            Command::Norm,
            Command::Lp,
            Command::HardyCheck,
            Command::SchurCheck,
            Command::SteinWeissCheck,
            Command::EstimateConstant,
            Command::Sweep,
            Command::Verify,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }
}

pub enum Failure {
    Usage(String),
    Internal(String),
}

impl From<frachardy::Error> for Failure {
    fn from(e: frachardy::Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let mut cfg = cli.opts;
    if let Some(path) = cfg.config.clone() {
        let file = RunConfig::load(&path).map_err(Failure::Usage)?;
        if let Some(cmd) = &file.command {
            if Command::parse(cmd) != Some(cli.command) {
                return Err(Failure::Usage(format!(
                    "config is for command `{cmd}`, not `{}`",
                    cli.command.name()
                )));
            }
        }
        cfg = cfg.merged_with(&file);
    }
    cfg.command = Some(cli.command.name().to_string());
    if cfg.dump_config {
        let text = serde_json::to_string_pretty(&cfg)
            .map_err(|e| Failure::Internal(e.to_string()))?;
        println!("{text}");
        return Ok(true);
    }
    match cli.command {
        Command::Norm => commands::norm(&cfg),
        Command::Lp => commands::lp(&cfg),
        Command::HardyCheck => commands::hardy_check(&cfg),
        Command::SchurCheck => commands::schur_check(&cfg),
        Command::SteinWeissCheck => commands::stein_weiss_check(&cfg),
        Command::EstimateConstant => commands::estimate_constant(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Verify => commands::verify(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(move || run(cli)) {
        Ok(Ok(true)) => ExitCode::from(0),
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Err(Failure::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
        Err(_) => ExitCode::from(3),
    }
}
