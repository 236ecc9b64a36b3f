use std::path::{Path, PathBuf};

use netgame_core::constructions::{
    build_clique, build_community_graph, build_complete_single_host, build_dense_k_supportable, build_h32,
    build_hkp, build_hypergraph_network, CommunitySkeleton, HypergraphSampler, HypergraphSpec,
};
use netgame_core::degree_sequence::{powerlaw_sequence, realize};
use netgame_core::dynamics::{run_dynamics, DynamicsPolicy, UpdateOrder};
use netgame_core::io::{self, GraphFormat};
use netgame_core::metrics::{graph_stats, max_invitees, verify_clustering_bound, verify_k_supportable_degree_bound};
use netgame_core::model::{connection_graph, EventConfiguration, Parameters};
use netgame_core::rational::{self, Rational};
use netgame_core::stability::{check_stability_criterion, check_stability_deviation};
use netgame_core::{Error, Result};
use serde_json::{json, Value};

use crate::args::{
    BuildArgs, CheckArgs, CheckMode, Command, Construction, DegreeSeqArgs, DynamicsArgs, ExportArgs, Format,
    MetricCheck, MetricsArgs, Order, ParamArgs, Sampler,
};

/// Everything a command produces; written out (and hashed) by the caller.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
    pub inputs: Vec<PathBuf>,
    pub seed: Option<u64>,
    pub params: Option<Value>,
}

impl Outcome {
    /// Sends `text` to `path` if given, otherwise to standard output.
    fn emit(&mut self, path: Option<&PathBuf>, text: String) {
        match path {
            Some(p) => self.files.push((p.clone(), text)),
            None => self.stdout.push_str(&text),
        }
    }

    fn record_params(&mut self, params: &Parameters) {
        self.params = Some(serde_json::to_value(io::params_to_doc(params)).expect("serializable"));
    }
}

pub fn parameters(args: &ParamArgs, n: usize) -> Result<Parameters> {
    let b = io::parse_fixed_cost(&args.b, "--b")?;
    let parse = |text: &str, flag: &str| -> Result<Rational> {
        rational::parse(text).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse { location: flag.into(), message },
            other => other,
        })
    };
    let (a, c) = match (&args.gamma, &args.a, &args.c) {
        (_, Some(a), Some(c)) if args.gamma.is_none() => (parse(a, "--a")?, parse(c, "--c")?),
        (Some(g), None, None) => {
            let gamma = parse(g, "--gamma")?;
            (Rational::from_integer(gamma.numer().clone()), Rational::from_integer(gamma.denom().clone()))
        }
        _ => return Err(Error::InvalidInput("give either --gamma or both --a and --c".into())),
    };
    Parameters::new(a, b, c, n)
}

fn required<T: Copy>(value: Option<T>, flag: &str, construction: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidInput(format!("{construction} needs {flag}")))
}

fn load(path: &Path, out: &mut Outcome) -> Result<EventConfiguration> {
    out.inputs.push(path.to_path_buf());
    io::parse_config(path)
}

fn build(args: &BuildArgs, out: &mut Outcome) -> Result<()> {
    let params = parameters(&args.params, 1)?;
    let config = match args.construction {
        Construction::Complete => build_complete_single_host(&params, required(args.size, "--size", "complete")?)?,
        Construction::Clique => build_clique(&params, required(args.size, "--size", "clique")?)?,
        Construction::Hkp => build_hkp(&params, required(args.k, "--k", "hkp")?, required(args.p, "--p", "hkp")?)?,
        Construction::H32 => build_h32(&params)?,
        Construction::Community => {
            let path = args
                .skeleton
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("community needs --skeleton".into()))?;
            out.inputs.push(path.clone());
            let text = io::read_file(path)?;
            let skeleton: CommunitySkeleton = serde_json::from_str(&text).map_err(|e| Error::Parse {
                location: format!("{} line {} column {}", path.display(), e.line(), e.column()),
                message: e.to_string(),
            })?;
            build_community_graph(&params, &skeleton)?.config
        }
        Construction::Hypergraph => {
            let seed = required(args.seed, "--seed", "hypergraph")?;
            out.seed = Some(seed);
            let spec = HypergraphSpec {
                n: required(args.size, "--size", "hypergraph")?,
                k: required(args.k, "--k", "hypergraph")?,
                d: required(args.degree, "--degree", "hypergraph")?,
                seed,
                sampler: match args.sampler {
                    Sampler::GirthAware => HypergraphSampler::GirthAware,
                    Sampler::Uniform => HypergraphSampler::Uniform,
                },
            };
            let net = build_hypergraph_network(&params, &spec)?;
            crate::diagnostic(json!({
                "level": "info",
                "hyperedges": net.m(),
                "removed": net.removed.len(),
            }));
            net.config
        }
        Construction::Dense => {
            let seed = required(args.seed, "--seed", "dense")?;
            out.seed = Some(seed);
            let n = required(args.size, "--size", "dense")?;
            build_dense_k_supportable(&params, n, required(args.k_max, "--k-max", "dense")?, seed)?.config
        }
    };
    out.record_params(&config.params);
    out.emit(args.out.as_ref(), io::config_to_json(&config));
    Ok(())
}

fn check(args: &CheckArgs, out: &mut Outcome) -> Result<()> {
    let config = load(&args.config, out)?;
    out.record_params(&config.params);
    let report = match args.mode {
        CheckMode::BestResponse => check_stability_deviation(&config),
        CheckMode::Criterion => check_stability_criterion(&config)?,
    };
    out.emit(args.out.as_ref(), io::to_pretty(&report));
    Ok(())
}

fn metrics(args: &MetricsArgs, out: &mut Outcome) -> Result<()> {
    let config = load(&args.config, out)?;
    out.record_params(&config.params);
    let graph = connection_graph(&config).graph;
    let stats = graph_stats(&graph);
    let mut doc = io::stats_json(&stats);
    doc["max_invitees"] = json!(max_invitees(&config));
    for check in &args.check {
        match check {
            MetricCheck::Clustering => {
                doc["clustering_bound"] = io::clustering_bound_json(&verify_clustering_bound(&graph)?);
            }
            MetricCheck::Ksupport => {
                let k = args.k_max.unwrap_or_else(|| max_invitees(&config));
                let mut verdict = io::degree_bound_json(&verify_k_supportable_degree_bound(&config, k)?);
                verdict["K"] = json!(k);
                doc["ksupport_bound"] = verdict;
            }
        }
    }
    let text = if args.json {
        io::to_pretty(&doc)
    } else {
        let mut lines = format!(
            "agents: {}\nedges: {}\naverage degree: {}\nclustering: {}\ngirth: {}\nconnected: {}\nlocal bridges: {}\nmax invitees: {}\n",
            stats.n,
            stats.edge_count,
            rational::format(&stats.average_degree),
            rational::format(&stats.clustering),
            stats.girth.map_or("none".to_string(), |g| g.to_string()),
            stats.connected,
            stats.local_bridges.len(),
            max_invitees(&config),
        );
        for (key, label) in [("clustering_bound", "clustering bound"), ("ksupport_bound", "K-supportable degree bound")] {
            if let Some(v) = doc.get(key) {
                lines.push_str(&format!("{label} holds: {}\n", v["holds"]));
            }
        }
        lines
    };
    out.emit(args.out.as_ref(), text);
    Ok(())
}

fn parse_powerlaw(spec: &str) -> Result<(f64, usize)> {
    let bad = || Error::Parse { location: "--powerlaw".into(), message: format!("expected alpha,n, got {spec:?}") };
    let (alpha, n) = spec.split_once(',').ok_or_else(bad)?;
    let alpha = match rational::parse(alpha) {
        Ok(r) => rational::to_f64(&r),
        Err(_) => alpha.trim().parse::<f64>().map_err(|_| bad())?,
    };
    let n = n.trim().parse().map_err(|_| bad())?;
    Ok((alpha, n))
}

fn degree_seq(args: &DegreeSeqArgs, out: &mut Outcome) -> Result<()> {
    let degrees = match (&args.input, &args.powerlaw) {
        (Some(path), None) => {
            out.inputs.push(path.clone());
            io::parse_degree_list(&io::read_file(path)?)?
        }
        (None, Some(spec)) => {
            let (alpha, n) = parse_powerlaw(spec)?;
            powerlaw_sequence(alpha, n)?
        }
        _ => return Err(Error::InvalidInput("give exactly one of --input and --powerlaw".into())),
    };
    let params = parameters(&args.params, degrees.len().max(1))?;
    out.seed = Some(args.seed);
    let report = realize(&degrees, &params, args.seed)?;
    out.record_params(&report.config.params);
    crate::diagnostic(json!({
        "level": "info",
        "K": report.k_used,
        "l1_shift": report.l1_shift,
        "budget": report.budget,
    }));
    out.emit(args.out.as_ref(), io::config_to_json(&report.config));
    if let Some(path) = &args.report {
        out.files.push((path.clone(), io::to_pretty(&io::realization_json(&report))));
    }
    Ok(())
}

fn dynamics(args: &DynamicsArgs, out: &mut Outcome) -> Result<()> {
    let config = load(&args.init, out)?;
    out.record_params(&config.params);
    out.seed = Some(args.seed);
    let order = match args.order {
        Order::Rr => UpdateOrder::RoundRobin,
        Order::Random => UpdateOrder::UniformRandom,
    };
    let mut policy = DynamicsPolicy::new(order, args.max_rounds, args.seed);
    if let Some(path) = &args.arrivals {
        out.inputs.push(path.clone());
        policy.arrivals = io::parse_arrivals(&io::read_file(path)?)?;
    }
    let (final_config, trace) = run_dynamics(&config, &policy)?;
    crate::diagnostic(json!({
        "level": "info",
        "status": trace.status,
        "rounds": trace.rounds,
        "changes": trace.changes,
    }));
    if let Some(path) = &args.trace {
        let lines: String = trace
            .records
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect();
        out.files.push((path.clone(), lines));
    }
    out.emit(args.out.as_ref(), io::config_to_json(&final_config));
    Ok(())
}

fn export(args: &ExportArgs, out: &mut Outcome) -> Result<()> {
    let config = load(&args.config, out)?;
    out.record_params(&config.params);
    let format = match args.format {
        Format::Edgelist => GraphFormat::EdgeList,
        Format::Dot => GraphFormat::Dot,
    };
    out.emit(args.out.as_ref(), io::export_graph(&connection_graph(&config).graph, format));
    Ok(())
}

/// Runs every command except `replay`, which needs the manifest machinery.
pub fn execute(command: &Command) -> Result<Outcome> {
    let mut out = Outcome::default();
    match command {
        Command::Build(a) => build(a, &mut out)?,
        Command::Check(a) => check(a, &mut out)?,
        Command::Metrics(a) => metrics(a, &mut out)?,
        Command::DegreeSeq(a) => degree_seq(a, &mut out)?,
        Command::Dynamics(a) => dynamics(a, &mut out)?,
        Command::Export(a) => export(a, &mut out)?,
        Command::Replay(_) => unreachable!("replay is handled by the manifest module"),
    }
    Ok(out)
}
