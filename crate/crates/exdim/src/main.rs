use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exdim::config::{parse_overrides, JobConfig};
use exdim::jobs::{certification_json, execute};
use exdim::CliError;
use exdim_core::Error;

#[derive(Parser)]
#[command(name = "exdim", version, about = "Entropy and dimension of exceptional sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the job described by a config file.
    Run {
        config: PathBuf,
        /// `--key value` overrides; dotted keys address sections.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
    /// Parse and validate a config file without running it.
    Validate {
        config: PathBuf,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
}

fn load(config: &PathBuf, overrides: &[String]) -> Result<JobConfig, CliError> {
    JobConfig::load(config, &parse_overrides(overrides)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, overrides } => load(config, overrides).and_then(|cfg| execute(&cfg)).and_then(|f| {
            let _ = std::io::stdout().lock().write_all(f.stdout.as_bytes());
            f.failure.map_or(Ok(String::new()), Err)
        }),
        Command::Validate { config, overrides } => {
            load(config, overrides).map(|cfg| format!("ok {} {}\n", cfg.job.name(), cfg.system.name()))
        }
    };
    match result {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let mut err = std::io::stderr().lock();
            let _ = writeln!(err, "{}: {e}", e.name());
            if let CliError::Compute(Error::NotCertifiedExpanding(r)) = &e {
                let _ = err.write_all(certification_json(r).as_bytes());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
