//! `--config` files: flat `key=value` lines mirroring the long flags.
//!
//! Entries are spliced in as flags right after the subcommand, so anything
//! given on the command line wins. A `command` entry supplies the
//! subcommand when none is given. Repeating a key repeats the flag; `true`
//! and `false` switch boolean flags.

use std::collections::BTreeSet;
use std::fs;

use polyadic::Error;

const GLOBALS_WITH_VALUE: [&str; 3] = ["--config", "--out", "--format"];

fn flag_name(arg: &str) -> Option<&str> {
    let name = arg.strip_prefix("--")?;
    Some(name.split_once('=').map_or(name, |(n, _)| n))
}

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

/// Position of the subcommand among the user arguments. Only global flags
/// may precede it.
fn command_position(args: &[String]) -> Option<usize> {
    let mut i = 0;
    while i < args.len() {
        let a = args[i].as_str();
        if GLOBALS_WITH_VALUE.contains(&a) {
            i += 2;
        } else if a == "--sequential" || GLOBALS_WITH_VALUE.iter().any(|g| a.starts_with(&format!("{g}="))) {
            i += 1;
        } else if a.starts_with('-') {
            return None;
        } else {
            return Some(i);
        }
    }
    None
}

pub fn parse_file(text: &str) -> Result<Vec<(String, String)>, Error> {
    let mut entries = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value, got {line:?}", no + 1)))?;
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() {
            return Err(Error::Parse(format!("config line {}: empty key", no + 1)));
        }
        entries.push((k.to_string(), v.trim().to_string()));
    }
    Ok(entries)
}

/// Expands `--config FILE` into explicit arguments.
pub fn expand(argv: Vec<String>) -> Result<Vec<String>, Error> {
    let Some((bin, rest)) = argv.split_first() else {
        return Ok(argv);
    };
    let Some(path) = config_path(rest) else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read config file {path}: {e}")))?;
    let entries = parse_file(&text)?;

    let given: BTreeSet<&str> = rest.iter().filter_map(|a| flag_name(a)).collect();
    let mut rest = rest.to_vec();
    let command = match command_position(&rest) {
        Some(i) => Some(rest.remove(i)),
        None => entries.iter().rev().find(|(k, _)| k == "command").map(|(_, v)| v.clone()),
    };

    let mut out = vec![bin.clone()];
    out.extend(command);
    for (k, v) in &entries {
        if k == "command" || given.contains(k.as_str()) {
            continue;
        }
        match v.as_str() {
            "false" => {}
            "true" => out.push(format!("--{k}")),
            _ => out.push(format!("--{k}={v}")),
        }
    }
    out.extend(rest);
    Ok(out)
}
