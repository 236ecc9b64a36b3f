//! Run manifests: what was run, with which seed and parameters, and the
//! SHA-256 of every input and output, so a run can be replayed and checked.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use clap::Parser;
use netgame_core::io;
use netgame_core::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::args::{Cli, Command};
use crate::commands::{execute, Outcome};

/// Key used for output sent to standard output.
const STDOUT: &str = "-";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    /// Arguments after the program name, without `--manifest`.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub params: Option<Value>,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    pub wall_clock_ms: u128,
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn strip_manifest_flag(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for arg in argv.iter().skip(1) {
        if skip {
            skip = false;
        } else if arg == "--manifest" {
            skip = true;
        } else if !arg.starts_with("--manifest=") {
            out.push(arg.clone());
        }
    }
    out
}

fn hash_inputs(outcome: &Outcome) -> Result<BTreeMap<String, String>> {
    outcome
        .inputs
        .iter()
        .map(|p| Ok((p.display().to_string(), sha256_hex(&io::read_file(p)?))))
        .collect()
}

fn hash_outputs(outcome: &Outcome) -> BTreeMap<String, String> {
    let mut out: BTreeMap<String, String> =
        outcome.files.iter().map(|(p, text)| (p.display().to_string(), sha256_hex(text))).collect();
    if !outcome.stdout.is_empty() {
        out.insert(STDOUT.into(), sha256_hex(&outcome.stdout));
    }
    out
}

/// Executes the command, writes its outputs and, if requested, a manifest.
pub fn run_recorded(cli: &Cli, argv: &[String]) -> Result<u8> {
    if let Command::Replay(args) = &cli.command {
        return replay(&args.manifest);
    }
    let start = Instant::now();
    let outcome = execute(&cli.command)?;
    for (path, text) in &outcome.files {
        io::write_file(path, text)?;
    }
    print!("{}", outcome.stdout);
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            args: strip_manifest_flag(argv),
            seed: outcome.seed,
            params: outcome.params.clone(),
            inputs: hash_inputs(&outcome)?,
            outputs: hash_outputs(&outcome),
            wall_clock_ms: start.elapsed().as_millis(),
        };
        io::write_file(path, &io::to_pretty(&manifest))?;
    }
    Ok(0)
}

/// Re-runs a manifest's command in memory and compares hashes; exit 0 when
/// every output is byte-identical, 1 otherwise.
fn replay(path: &Path) -> Result<u8> {
    let text = io::read_file(path)?;
    let manifest: RunManifest = serde_json::from_str(&text).map_err(|e| Error::Parse {
        location: format!("{} line {} column {}", path.display(), e.line(), e.column()),
        message: e.to_string(),
    })?;
    let argv: Vec<String> = std::iter::once("netgame".to_string()).chain(manifest.args.iter().cloned()).collect();
    let cli = Cli::try_parse_from(&argv).map_err(|e| Error::Parse {
        location: format!("{} args", path.display()),
        message: e.to_string(),
    })?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(Error::InvalidInput("a manifest cannot record a replay".into()));
    }
    let outcome = execute(&cli.command)?;
    let inputs = hash_inputs(&outcome)?;
    let outputs = hash_outputs(&outcome);
    let compare = |expected: &BTreeMap<String, String>, actual: &BTreeMap<String, String>| -> Vec<Value> {
        expected
            .keys()
            .chain(actual.keys())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|k| {
                json!({
                    "path": k,
                    "expected": expected.get(k),
                    "actual": actual.get(k),
                    "matches": expected.get(k) == actual.get(k),
                })
            })
            .collect()
    };
    let input_report = compare(&manifest.inputs, &inputs);
    let output_report = compare(&manifest.outputs, &outputs);
    let reproduced = output_report.iter().all(|v| v["matches"] == json!(true));
    let report = json!({
        "reproduced": reproduced,
        "inputs_unchanged": input_report.iter().all(|v| v["matches"] == json!(true)),
        "inputs": input_report,
        "outputs": output_report,
    });
    print!("{}", io::to_pretty(&report));
    Ok(if reproduced { 0 } else { 1 })
}
