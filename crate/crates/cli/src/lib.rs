//! Command-line front end: δt sweeps, spectroscopy scans, visibility
//! scaling tables and oracle validation suites.

pub mod args;
pub mod commands;
pub mod config;
pub mod grid;
pub mod output;
pub mod validate;

use std::fmt;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters (exit 2).
    Usage(String),
    /// Reading or writing a file failed (exit 3).
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(err) => write!(f, "I/O error: {err}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

impl From<corrspec::Error> for CliError {
    fn from(err: corrspec::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "CORRSPEC_THREADS";
