use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "netgame", version, about = "Stable event configurations and the networks they induce")]
pub struct Cli {
    /// Write a run manifest (arguments, seed, parameters, file hashes).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Build a configuration with one of the constructions.
    Build(BuildArgs),
    /// Check a configuration for stability.
    Check(CheckArgs),
    /// Graph statistics and inequality checks for a configuration.
    Metrics(MetricsArgs),
    /// Realize a degree sequence as a stable network.
    DegreeSeq(DegreeSeqArgs),
    /// Run best-response dynamics from a configuration.
    Dynamics(DynamicsArgs),
    /// Export the connection graph of a configuration.
    Export(ExportArgs),
    /// Re-run the command recorded in a manifest and compare output hashes.
    Replay(ReplayArgs),
}

/// Economic parameters. `--gamma p/q` sets `a = p`, `c = q` unless `--a`
/// and `--c` are both given.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub c: Option<String>,
    /// Fixed cost per unit rate: a rational or `eps`.
    #[arg(long, default_value = "eps")]
    pub b: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Complete,
    Clique,
    Hkp,
    H32,
    Community,
    Hypergraph,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sampler {
    GirthAware,
    Uniform,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub construction: Construction,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Number of agents (complete, hypergraph, dense) or clique size (clique).
    #[arg(long)]
    pub size: Option<usize>,
    /// Clique size for hkp; hyperedge size for hypergraph.
    #[arg(long)]
    pub k: Option<usize>,
    /// Overlap size for hkp.
    #[arg(long)]
    pub p: Option<usize>,
    /// Hyperedges per vertex for hypergraph.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Invitee cap K for dense.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Skeleton JSON for community.
    #[arg(long)]
    pub skeleton: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "girth-aware")]
    pub sampler: Sampler,
    /// Required by the random constructions.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    BestResponse,
    Criterion,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    pub config: PathBuf,
    #[arg(long, value_enum, default_value = "best-response")]
    pub mode: CheckMode,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricCheck {
    Clustering,
    Ksupport,
}

#[derive(Debug, Clone, Args)]
pub struct MetricsArgs {
    pub config: PathBuf,
    /// Emit JSON instead of a text summary.
    #[arg(long)]
    pub json: bool,
    #[arg(long, value_enum)]
    pub check: Vec<MetricCheck>,
    /// Invitee cap for `--check ksupport`; defaults to the largest invitee count.
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["input", "powerlaw"]))]
pub struct DegreeSeqArgs {
    /// One degree per line.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// `alpha,n`, e.g. `5/2,2000`.
    #[arg(long)]
    pub powerlaw: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Rr,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct DynamicsArgs {
    #[arg(long)]
    pub init: PathBuf,
    #[arg(long, value_enum, default_value = "rr")]
    pub order: Order,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub max_rounds: usize,
    /// JSON list of arriving agents and the events they host.
    #[arg(long)]
    pub arrivals: Option<PathBuf>,
    /// One JSON record per step.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Final configuration.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Edgelist,
    Dot,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    pub config: PathBuf,
    #[arg(long, value_enum, default_value = "edgelist")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
