//! Plain-text `key=value` configuration files.
//!
//! Keys are long flag names (`snr-db`, `trials`, ...). Command-line flags win
//! over file entries. Run manifests are valid configuration files: their
//! bookkeeping keys are skipped on load.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Manifest keys that carry run metadata rather than flags.
pub const METADATA_KEYS: &[&str] = &["subcommand", "version", "started", "finished", "manifest"];

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key=value, got `{line}`", lineno + 1));
        };
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("line {}: empty key", lineno + 1));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

/// Finds `--config <path>` / `--config=<path>` among the subcommand's flags.
fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            return iter.next().map(PathBuf::from);
        }
        if let Some(path) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(path));
        }
    }
    None
}

fn load(path: &Path, subcommand: &str) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let entries = parse_config(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut args = Vec::new();
    for (key, value) in entries {
        if key == "subcommand" && value != subcommand {
            return Err(CliError::Config(format!(
                "{} is for `{value}`, not `{subcommand}`",
                path.display()
            )));
        }
        if key == "config" {
            return Err(CliError::Config(format!("{}: nested `config` key", path.display())));
        }
        if METADATA_KEYS.contains(&key.as_str()) {
            continue;
        }
        args.push(OsString::from(format!("--{key}={value}")));
    }
    Ok(args)
}

/// Rewrites `argv` so that entries of the `--config` file come right after
/// the subcommand and explicit flags follow them. Clap is configured to let
/// later occurrences override earlier ones.
pub fn expand_argv(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    if argv.len() < 2 {
        return Ok(argv);
    }
    let sub = argv[1].to_string_lossy().into_owned();
    let Some(path) = config_path(&argv[2..]) else {
        return Ok(argv);
    };
    let from_file = load(&path, &sub)?;
    let mut out = Vec::with_capacity(argv.len() + from_file.len());
    out.extend_from_slice(&argv[..2]);
    out.extend(from_file);
    out.extend_from_slice(&argv[2..]);
    Ok(out)
}
