//! `netgame`: build, check and analyse event configurations from the shell.
//!
//! Exit codes: 0 on success (including an "unstable" verdict), 1 on a
//! domain rejection, 2 on malformed input or I/O failure. Diagnostics go to
//! standard error as JSON lines.

mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::Parser;
use netgame_core::Error;
use serde_json::json;

use args::Cli;

fn exit_code(err: &Error) -> u8 {
    if err.is_domain_rejection() {
        1
    } else {
        2
    }
}

fn kind(err: &Error) -> &'static str {
    match err {
        Error::InvalidPair(_) | Error::InvalidInput(_) => "invalid-input",
        Error::Regime(_) => "regime",
        Error::UnsupportedRegime(_) => "unsupported-regime",
        Error::Construction(_) => "construction",
        Error::Assumption { .. } => "assumption",
        Error::Infeasible(_) => "infeasible",
        Error::Invariant(_) => "invariant",
        Error::Parse { .. } => "parse",
        Error::Io { .. } => "io",
    }
}

pub fn diagnostic(value: serde_json::Value) {
    eprintln!("{value}");
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("NETGAME_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::InvalidInput(format!("NETGAME_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidInput(format!("cannot configure {threads} threads: {e}")))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse_from(&argv);
    let result = configure_threads().and_then(|()| manifest::run_recorded(&cli, &argv));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let mut line = json!({"level": "error", "kind": kind(&err), "message": err.to_string()});
            if let Error::Assumption { id, .. } = &err {
                line["assumption"] = json!(id);
            }
            diagnostic(line);
            ExitCode::from(exit_code(&err))
        }
    }
}
