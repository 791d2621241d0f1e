//! Command-line driver: reads a JSON run config, runs one command and writes
//! a CSV or JSON data file.
//!
//! Exit codes: 0 success, 1 usage or unsupported regime, 2 property
//! violation (output is still written), 3 solver failure.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use clap::Parser;
use std::ffi::OsString;
use std::path::PathBuf;

pub use commands::{run_command, Command, Outcome};
pub use config::{load, RunConfig};
pub use error::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fanomode", version, about = "Fano-interference cavity QED: spectra, kernels, dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run config; defaults are used when omitted
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<config::Format>,
    /// Override a config value by dotted path, e.g. --set model.eta=0.5
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Omit the metadata header
    #[arg(long, global = true)]
    pub no_header: bool,
}

/// Effective config: file, then `--set`, then the dedicated flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let text = match &cli.config {
        Some(p) => Some(
            std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?,
        ),
        None => None,
    };
    let mut config = load(text.as_deref(), &cli.overrides)?;
    if let Some(f) = cli.format {
        config.output.format = f;
    }
    if cli.no_header {
        config.output.header = false;
    }
    if let Some(p) = &cli.out {
        config.output.path = Some(p.display().to_string());
    }
    Ok(config)
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let config = resolve_config(cli)?;
    let outcome = run_command(cli.command, &config)?;
    let text = output::render(&outcome.document, config.output.format, config.output.header);
    match &config.output.path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    for v in &outcome.violations {
        eprintln!("property violation: {v}");
    }
    Ok(if outcome.violations.is_empty() { EXIT_OK } else { EXIT_VIOLATION })
}
