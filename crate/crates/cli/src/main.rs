mod args;
mod commands;
mod config;
mod emit;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use polyadic::{par, Error};
use serde_json::Value;

use args::Cli;

const USAGE: u8 = 2;
const FAILURE: u8 = 1;

fn init_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("POLYADIC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("POLYADIC_THREADS must be a non-negative integer, got {raw:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("cannot size the thread pool: {e}")))?;
    }
    Ok(())
}

/// The effective configuration echoed into every output.
fn effective_config(cli: &Cli) -> Value {
    let mut config = serde_json::to_value(&cli.command).expect("arguments serialize");
    config["format"] = serde_json::to_value(cli.format).expect("format serializes");
    if let Some(out) = &cli.out {
        config["out"] = Value::String(out.display().to_string());
    }
    config
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_usage() { USAGE } else { FAILURE })
}

fn main() -> ExitCode {
    let argv = match config::expand(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    if let Err(e) = init_threads() {
        return fail(&e);
    }

    let result = if cli.sequential {
        par::sequential(|| commands::run(&cli.command))
    } else {
        commands::run(&cli.command)
    };
    let output = match result {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = emit::emit(&effective_config(&cli), &output, cli.format, cli.out.as_deref()) {
        return fail(&Error::from(e));
    }
    ExitCode::SUCCESS
}
