//! Scenario-driven front end behind the `dce` binary.
//!
//! Every subcommand reads a JSON [`ScenarioConfig`], validates it for that
//! subcommand (including sampling guards, so a grid that is too coarse is
//! rejected before any work starts), runs the computation and writes CSV
//! and/or JSON files into the output directory.
//!
//! Exit codes: `0` success, `1` a `verify` check failed, `2` configuration
//! or input-file error, `3` a numerical guard refused a result.

pub mod config;
pub mod output;
pub mod run;
pub mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use config::{Command, OutputFormat, Scenario, ScenarioConfig, TrajectoryConfig};
pub use run::{run_radiate, run_spectrum, run_statics, RunOptions, RunOutput};
pub use verify::{run_verify, verify_report, CheckResult, Status, VerifyReport};

use crate::error::Error;

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_GUARD: u8 = 3;

/// Exit code for an error that stopped a run.
pub fn exit_code(e: &Error) -> u8 {
    if e.is_numerical_guard() {
        EXIT_GUARD
    } else {
        EXIT_CONFIG
    }
}

#[derive(Debug, Parser)]
#[command(name = "dce", version, about = "Vacuum particle creation in cavities with moving boundaries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Per-mode creation spectrum of a cavity.
    Spectrum(CommonArgs),
    /// Spectrum and energy radiated by a single mirror.
    Radiate(CommonArgs),
    /// Regularized zero-point energy, Casimir force and parabolic strength.
    Statics(CommonArgs),
    /// Oracle cross-checks and property suite with a pass/fail report.
    Verify(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Scenario config, or a JSON summary from an earlier run.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides the config).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Which files to write (overrides the config).
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
    /// No random numbers are used anywhere; accepted to make that explicit.
    #[arg(long)]
    pub seedless: bool,
}

impl CliCommand {
    fn parts(&self) -> (Command, &CommonArgs) {
        match self {
            CliCommand::Spectrum(a) => (Command::Spectrum, a),
            CliCommand::Radiate(a) => (Command::Radiate, a),
            CliCommand::Statics(a) => (Command::Statics, a),
            CliCommand::Verify(a) => (Command::Verify, a),
        }
    }
}

/// Runs a parsed command line and maps the outcome to an exit code.
pub fn execute(cli: &Cli) -> ExitCode {
    let (command, args) = cli.command.parts();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    let outcome = (|| -> Result<u8, Error> {
        let config = ScenarioConfig::load(&args.config)?;
        let opts = RunOptions::resolve(&config, args.out.as_deref(), args.format);
        let scenario = config.validate(command)?;
        let files = match command {
            Command::Spectrum => run_spectrum(&scenario, &opts)?.files,
            Command::Radiate => run_radiate(&scenario, &opts)?.files,
            Command::Statics => run_statics(&scenario, &opts)?.files,
            Command::Verify => {
                let (report, out) = run_verify(&scenario, &opts)?;
                for c in &report.checks {
                    let status = match c.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Skip => "SKIP",
                    };
                    println!("{status} {}: {}", c.name, c.detail);
                }
                for f in &out.files {
                    eprintln!("wrote {}", f.display());
                }
                return Ok(if report.guard_failure {
                    EXIT_GUARD
                } else if report.passed {
                    0
                } else {
                    EXIT_CHECK_FAILED
                });
            }
        };
        for f in &files {
            eprintln!("wrote {}", f.display());
        }
        Ok(0)
    })();
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error [{}]: {e}", e.kind());
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Entry point of the `dce` binary.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    execute(&Cli::parse())
}
