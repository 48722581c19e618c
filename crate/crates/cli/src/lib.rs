//! The `cavnet` command-line tool as a library, so that tests can drive it
//! in-process. [`run`] takes the argument list and both output streams and
//! returns the process exit code.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 physical singularity,
//! 3 validation failure. Every failure writes exactly one
//! `error: <code>: <message>` line to the diagnostic stream.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub mod args;
mod commands;
pub mod fmt;
pub mod settings;

use args::{Cli, Command};
use settings::Settings;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SINGULAR: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Io(String),
    Core(cavnet::Error),
    Validation(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Core(e) => e.code(),
            CliError::Validation(_) => "validation-failed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_physical_singularity() => EXIT_SINGULAR,
            // overflow of otherwise valid inputs only happens next to a singularity
            CliError::Core(cavnet::Error::NonFinite(_)) => EXIT_SINGULAR,
            CliError::Validation(_) => EXIT_VALIDATION,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Config(m) | CliError::Io(m) | CliError::Validation(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<cavnet::Error> for CliError {
    fn from(e: cavnet::Error) -> Self {
        CliError::Core(e)
    }
}

/// What a successful command produced.
pub(crate) struct Output {
    pub data: String,
    /// Non-fatal diagnostics, one per line, for the diagnostic stream.
    pub warnings: Vec<String>,
    /// Set when the data is complete but the run must still fail.
    pub failure: Option<CliError>,
}

pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => return clap_failure(e, stdout, stderr),
    };
    match execute(cli) {
        Ok((out, target)) => {
            for w in &out.warnings {
                let _ = writeln!(stderr, "WARN: {w}");
            }
            let written = match target {
                Some(path) => std::fs::write(&path, out.data.as_bytes())
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
                None => stdout
                    .write_all(out.data.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
            };
            match (written, out.failure) {
                (Err(e), _) | (Ok(()), Some(e)) => report(&e, stderr),
                (Ok(()), None) => EXIT_OK,
            }
        }
        Err(e) => report(&e, stderr),
    }
}

fn execute(cli: Cli) -> Result<(Output, Option<std::path::PathBuf>), CliError> {
    let settings = Settings::resolve(cli.flags)?;
    let out = match cli.command {
        Command::Steady => commands::steady(&settings)?,
        Command::Coupling => commands::coupling(&settings)?,
        Command::Evolve => commands::evolve(&settings)?,
        Command::Taustar => commands::taustar(&settings)?,
        Command::Feasibility => commands::feasibility(&settings)?,
        Command::Validate => commands::validate(&settings)?,
    };
    Ok((out, settings.f.out.clone()))
}

fn report(e: &CliError, stderr: &mut dyn Write) -> i32 {
    let msg = e.to_string().replace('\n', " ");
    let _ = writeln!(stderr, "error: {}: {}", e.code(), msg);
    e.exit_code()
}

fn clap_failure(e: clap::Error, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    use clap::error::ErrorKind;
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = write!(stdout, "{e}");
            EXIT_OK
        }
        ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand | ErrorKind::MissingSubcommand => {
            report(&CliError::Usage("no subcommand given; try --help".into()), stderr)
        }
        _ => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ").trim();
            report(&CliError::Usage(first.to_owned()), stderr)
        }
    }
}
