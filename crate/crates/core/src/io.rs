//! JSON and text formats: configurations, graph exports, reports.
//!
//! Rationals are always strings (`"p/q"`, or `"p"` on input); the fixed
//! cost `b` may also be `"eps"`.

use std::collections::BTreeSet;
use std::path::Path;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::degree_sequence::RealizationReport;
use crate::dynamics::Arrival;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::{ClusteringBound, DegreeBound, GraphStats};
use crate::model::{AgentId, Event, EventConfiguration, FixedCost, Parameters};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub a: String,
    pub b: String,
    pub c: String,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventDoc {
    pub host: AgentId,
    pub invitees: Vec<AgentId>,
    pub rate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub params: ParamsDoc,
    pub events: Vec<EventDoc>,
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { location: location.into(), message: message.into() }
}

fn parse_rational_at(text: &str, location: &str) -> Result<Rational> {
    rational::parse(text).map_err(|e| match e {
        Error::Parse { message, .. } => parse_error(location, format!("{message} (got {text:?})")),
        other => other,
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| parse_error(format!("{what} line {} column {}", e.line(), e.column()), e.to_string()))
}

pub fn parse_fixed_cost(text: &str, location: &str) -> Result<FixedCost> {
    if text.trim() == "eps" {
        return Ok(FixedCost::Infinitesimal);
    }
    let b = parse_rational_at(text, location)?;
    if b < Rational::zero() {
        return Err(parse_error(location, format!("b must be non-negative, got {text:?}")));
    }
    Ok(FixedCost::Value(b))
}

pub fn params_from_doc(doc: &ParamsDoc) -> Result<Parameters> {
    let a = parse_rational_at(&doc.a, "params.a")?;
    let c = parse_rational_at(&doc.c, "params.c")?;
    let b = parse_fixed_cost(&doc.b, "params.b")?;
    Parameters::new(a, b, c, doc.n).map_err(|e| parse_error("params", e.to_string()))
}

pub fn params_to_doc(params: &Parameters) -> ParamsDoc {
    let b = match &params.b {
        FixedCost::Infinitesimal => "eps".to_string(),
        FixedCost::Value(b) => rational::format(b),
    };
    ParamsDoc { a: rational::format(&params.a), b, c: rational::format(&params.c), n: params.n }
}

pub fn config_from_doc(doc: &ConfigDoc) -> Result<EventConfiguration> {
    let params = params_from_doc(&doc.params)?;
    let n = params.n;
    let mut config = EventConfiguration::empty(params);
    for (i, e) in doc.events.iter().enumerate() {
        let at = |field: &str| format!("events[{i}].{field}");
        if e.host >= n {
            return Err(parse_error(at("host"), format!("agent {} does not exist (n = {n})", e.host)));
        }
        let mut seen = BTreeSet::new();
        for (j, &u) in e.invitees.iter().enumerate() {
            let location = format!("events[{i}].invitees[{j}]");
            if u >= n {
                return Err(parse_error(location, format!("agent {u} does not exist (n = {n})")));
            }
            if u == e.host {
                return Err(parse_error(location, "the host is not listed among its invitees"));
            }
            if !seen.insert(u) {
                return Err(parse_error(location, format!("duplicate invitee {u}")));
            }
        }
        if seen.is_empty() {
            return Err(parse_error(at("invitees"), "an event needs at least one invitee"));
        }
        let rate = parse_rational_at(&e.rate, &at("rate"))?;
        if !rate.is_positive() {
            return Err(parse_error(at("rate"), format!("rate must be positive, got {:?}", e.rate)));
        }
        config.push_event(Event::new(e.host, seen, rate)?)?;
    }
    Ok(config)
}

pub fn config_to_doc(config: &EventConfiguration) -> ConfigDoc {
    ConfigDoc {
        params: params_to_doc(&config.params),
        events: config
            .events()
            .map(|e| EventDoc {
                host: e.host,
                invitees: e.invitees.iter().copied().collect(),
                rate: rational::format(&e.rate),
            })
            .collect(),
    }
}

/// Strict parse: unknown fields, malformed rationals, dangling agent ids
/// and non-positive rates are errors carrying their location.
pub fn parse_config_str(text: &str) -> Result<EventConfiguration> {
    config_from_doc(&parse_json(text, "configuration")?)
}

pub fn parse_config(path: &Path) -> Result<EventConfiguration> {
    parse_config_str(&read_file(path)?)
}

/// Canonical rendering: events grouped by host in hosting order, invitees
/// sorted, rationals reduced.
pub fn config_to_json(config: &EventConfiguration) -> String {
    let mut text = serde_json::to_string_pretty(&config_to_doc(config)).expect("serializable");
    text.push('\n');
    text
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Dot,
}

/// Sorted `u v` lines with `u < v`.
pub fn export_edgelist(g: &Graph) -> String {
    g.edges().into_iter().map(|(u, v)| format!("{u} {v}\n")).collect()
}

pub fn export_dot(g: &Graph) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        out.push_str(&format!("  {v};\n"));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  {u} -- {v};\n"));
    }
    out.push_str("}\n");
    out
}

pub fn export_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::EdgeList => export_edgelist(g),
        GraphFormat::Dot => export_dot(g),
    }
}

pub fn parse_edgelist(text: &str) -> Result<Vec<(AgentId, AgentId)>> {
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let parsed: Option<Vec<AgentId>> = parts.iter().map(|p| p.parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[u, v]) if u != v => edges.push((u.min(v), u.max(v))),
            _ => return Err(parse_error(format!("line {}", i + 1), format!("expected two distinct agent ids, got {line:?}"))),
        }
    }
    Ok(edges)
}

/// One positive integer per line; blank lines are skipped.
pub fn parse_degree_list(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let d: usize = line
            .parse()
            .map_err(|_| parse_error(format!("line {}", i + 1), format!("expected a positive integer, got {line:?}")))?;
        out.push(d);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrivalEventDoc {
    invitees: Vec<AgentId>,
    rate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrivalDoc {
    round: usize,
    events: Vec<ArrivalEventDoc>,
}

/// A JSON list of `{"round": r, "events": [{"invitees": [...], "rate": "p/q"}]}`.
pub fn parse_arrivals(text: &str) -> Result<Vec<Arrival>> {
    let docs: Vec<ArrivalDoc> = parse_json(text, "arrivals")?;
    docs.iter()
        .enumerate()
        .map(|(i, doc)| {
            if doc.round == 0 {
                return Err(parse_error(format!("arrivals[{i}].round"), "rounds start at 1"));
            }
            let events = doc
                .events
                .iter()
                .enumerate()
                .map(|(j, e)| {
                    let location = format!("arrivals[{i}].events[{j}].rate");
                    let rate = parse_rational_at(&e.rate, &location)?;
                    if !rate.is_positive() {
                        return Err(parse_error(location, "rate must be positive"));
                    }
                    Ok((e.invitees.iter().copied().collect(), rate))
                })
                .collect::<Result<_>>()?;
            Ok(Arrival { round: doc.round, events })
        })
        .collect()
}

pub fn stats_json(stats: &GraphStats) -> Value {
    json!({
        "n": stats.n,
        "edge_count": stats.edge_count,
        "degree_sequence": stats.degree_sequence,
        "average_degree": rational::format(&stats.average_degree),
        "average_degree_over_support": rational::format(&stats.average_degree_over_support),
        "clustering": rational::format(&stats.clustering),
        "triangle_counts": stats.triangle_counts,
        "local_bridges": stats.local_bridges,
        "girth": stats.girth,
        "connected": stats.connected,
    })
}

pub fn clustering_bound_json(bound: &ClusteringBound) -> Value {
    json!({
        "clustering": rational::format(&bound.lhs),
        "lower_bound": rational::format(&bound.rhs),
        "holds": bound.holds,
        "sharper_bound": bound.sharper.as_ref().map(|(r, ok)| json!({"value": rational::format(r), "holds": ok})),
        "degenerate": bound.degenerate,
    })
}

pub fn degree_bound_json(bound: &DegreeBound) -> Value {
    json!({
        "average_degree": rational::format(&bound.average_degree),
        "upper_bound": rational::format(&bound.bound),
        "holds": bound.holds,
    })
}

pub fn realization_json(report: &RealizationReport) -> Value {
    json!({
        "target": report.target,
        "adjusted": report.adjusted,
        "achieved": report.achieved,
        "l1_shift": report.l1_shift,
        "K": report.k_used,
        "max_invitees": report.max_invitees(),
        "budget": report.budget,
        "fallback_shift": report.fallback_shift,
        "girth_orders": report.girth_orders,
        "step_log": report.step_log,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}
