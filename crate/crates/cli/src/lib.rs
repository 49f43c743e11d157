//! The `runlattice` command-line tool.
//!
//! Exit codes: 0 pass, 1 property failure, 2 usage error, 3 scale or
//! structure error. Data goes to standard output (or `--output`), warnings
//! and errors to standard error.

mod args;
mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use runlattice_core::Error;

pub use args::{CheckKind, Cli, Command, Format, MetricArg, ModeArg, Options, OrderingArg};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SCALE: i32 = 3;

/// Largest `--cap` accepted.
pub const HARD_CAP: usize = 1_000_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid custom assignment {path}: {reason}")]
    Custom { path: String, reason: String },
    #[error("cannot write output: {0}")]
    Write(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Custom { .. } | CliError::Write(_) => EXIT_USAGE,
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

pub(crate) fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::UniverseTooLarge { .. } | Error::NotALattice(_) | Error::NoClosedForm(_) | Error::Invariant(_) => EXIT_SCALE,
        Error::NotDistributive { .. }
        | Error::BottomHasNoDecomposition
        | Error::NotAValuation { .. }
        | Error::InconsistentAssignment { .. } => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

/// Whether a command's checked property held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let mut data = String::new();
    let mut warnings = Vec::new();
    let result = commands::dispatch(&cli, &mut data, &mut warnings);
    for w in &warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let outcome = match result {
        Ok(outcome) => outcome,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.opts.output {
        Some(path) => std::fs::write(path, data.as_bytes()),
        None => stdout.write_all(data.as_bytes()).and_then(|_| stdout.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {}", CliError::Write(e));
        return EXIT_USAGE;
    }
    match outcome {
        Outcome::Pass => EXIT_PASS,
        Outcome::Fail => EXIT_FAIL,
    }
}
