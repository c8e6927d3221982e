//! Flat `key = value` files whose keys are long flag names.
//!
//! The file's entries are spliced in right after the subcommand, ahead of the
//! user's own flags; since every flag overrides itself, the command line wins.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use crate::CliError;

/// Parse `key = value` lines into `--key value` pairs.
pub fn parse(text: &str, origin: &Path) -> Result<Vec<OsString>, CliError> {
    let mut args = Vec::new();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "{}:{}: expected key=value, got {line:?}",
                origin.display(),
                number + 1
            )));
        };
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!(
                "{}:{}: invalid key {key:?}",
                origin.display(),
                number + 1
            )));
        }
        args.push(OsString::from(format!("--{key}")));
        let value = value.trim();
        if !value.is_empty() {
            args.push(OsString::from(value));
        }
    }
    Ok(args)
}

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut iter = argv.iter();
    while let Some(arg) = iter.next() {
        let text = arg.to_string_lossy();
        if text == "--config" {
            return iter.next().cloned();
        }
        if let Some(path) = text.strip_prefix("--config=") {
            return Some(OsString::from(path));
        }
    }
    None
}

/// Splice the `--config` file's flags after the subcommand.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let path = Path::new(&path);
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let extra = parse(&text, path)?;
    let split = argv.len().min(2);
    let mut out = argv[..split].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[split..]);
    Ok(out)
}
