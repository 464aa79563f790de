//! Experiment manifests: a flat `key=value` file whose keys are flag names
//! without the leading dashes. Blank lines and `#` comments are ignored.
//! Values from the file are spliced into the argument list after the
//! subcommand unless the same flag was given explicitly.

use std::collections::HashSet;
use std::ffi::OsString;
use std::path::Path;

use crate::CliError;

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config line {}: expected key=value",
                lineno + 1
            )));
        };
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!("config line {}: invalid key", lineno + 1)));
        }
        entries.push((key.to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

/// Locates `--config PATH` / `--config=PATH` in `args`.
fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Splices config-file flags into `args` (program name first).
pub fn merge_config_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let strings: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let Some(path) = config_path(&strings) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))?;
    let entries = parse_config(&text)?;
    merge_entries(strings, &entries).map(|v| v.into_iter().map(OsString::from).collect())
}

fn merge_entries(args: Vec<String>, entries: &[(String, String)]) -> Result<Vec<String>, CliError> {
    let given: HashSet<String> = args
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    // subcommand = first argument after the program name that is not an
    // option or the config path
    let mut insert_at = None;
    let mut skip_next = false;
    for (i, a) in args.iter().enumerate().skip(1) {
        if skip_next {
            skip_next = false;
            continue;
        }
        if a == "--config" {
            skip_next = true;
            continue;
        }
        if !a.starts_with('-') {
            insert_at = Some(i + 1);
            break;
        }
    }
    let Some(at) = insert_at else {
        return Err(CliError::Usage("a subcommand is required".into()));
    };
    let mut extra = Vec::new();
    for (key, value) in entries {
        if !given.contains(key) {
            extra.push(format!("--{key}={value}"));
        }
    }
    let mut out = args;
    out.splice(at..at, extra);
    Ok(out)
}
