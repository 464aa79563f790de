use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use corrspec::exec::init_thread_pool;
use corrspec_cli::args::{Cli, Command};
use corrspec_cli::config::merge_config_args;
use corrspec_cli::{commands, CliError, THREADS_ENV};

fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Err(CliError::Usage(format!("{THREADS_ENV} is not valid unicode"))),
    }
}

fn run() -> Result<bool, CliError> {
    if let Some(threads) = thread_cap()? {
        init_thread_pool(threads);
    }
    let argv = merge_config_args(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = err.print();
            return Ok(true);
        }
        Err(err) => return Err(CliError::Usage(err.render().to_string())),
    };
    match &cli.command {
        Command::HomScan(a) => commands::hom_scan_cmd(a),
        Command::Spectroscopy(a) => commands::spectroscopy_cmd(a),
        Command::Scaling(a) => commands::scaling_cmd(a),
        Command::Validate(a) => commands::validate_cmd(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("corrspec: {}", err.to_string().trim_end());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
