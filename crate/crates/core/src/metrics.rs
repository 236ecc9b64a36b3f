//! Structural measurements on connection graphs: clustering, local bridges,
//! strong subgraphs, girth, and the clustering and degree inequalities.

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{AgentId, EventConfiguration};
use crate::rational::{self, Rational};

/// Number of triangles through each vertex.
pub fn triangle_counts(g: &Graph) -> Vec<usize> {
    (0..g.n())
        .map(|v| {
            let nv = g.neighbors(v);
            let twice: usize = nv.iter().map(|&u| g.neighbors(u).intersection(nv).count()).sum();
            twice / 2
        })
        .collect()
}

/// Vertices of degree at least 2.
pub fn clustering_support(g: &Graph) -> Vec<AgentId> {
    (0..g.n()).filter(|&v| g.degree(v) >= 2).collect()
}

/// Mean over vertices of degree at least 2 of the fraction of neighbour
/// pairs that are adjacent; 0 when no vertex has degree 2 or more.
pub fn clustering_coefficient(g: &Graph) -> Rational {
    let support = clustering_support(g);
    if support.is_empty() {
        return Rational::zero();
    }
    let triangles = triangle_counts(g);
    let total: Rational = support
        .iter()
        .map(|&v| {
            let d = g.degree(v);
            rational::from_usize(triangles[v]) / rational::from_usize(d * (d - 1) / 2)
        })
        .sum();
    total / rational::from_usize(support.len())
}

pub fn average_degree(g: &Graph) -> Rational {
    if g.n() == 0 {
        return Rational::zero();
    }
    rational::from_usize(2 * g.edge_count()) / rational::from_usize(g.n())
}

/// Average degree over vertices of degree at least 2 (0 if there are none).
pub fn average_degree_over_support(g: &Graph) -> Rational {
    let support = clustering_support(g);
    if support.is_empty() {
        return Rational::zero();
    }
    let total: usize = support.iter().map(|&v| g.degree(v)).sum();
    rational::from_usize(total) / rational::from_usize(support.len())
}

/// Edges whose endpoints have no common neighbour.
pub fn local_bridges(g: &Graph) -> Vec<(AgentId, AgentId)> {
    g.edges()
        .into_iter()
        .filter(|&(u, v)| g.neighbors(u).is_disjoint(g.neighbors(v)))
        .collect()
}

/// Largest number of local bridges meeting at one vertex.
pub fn max_local_bridges_per_vertex(g: &Graph) -> usize {
    let mut count = vec![0usize; g.n()];
    for (u, v) in local_bridges(g) {
        count[u] += 1;
        count[v] += 1;
    }
    count.into_iter().max().unwrap_or(0)
}

/// True iff every common neighbour of two vertices of `h` lies in `h`.
pub fn strong_subgraph_check(g: &Graph, h: &[AgentId]) -> Result<bool> {
    if let Some(&bad) = h.iter().find(|&&v| v >= g.n()) {
        return Err(Error::InvalidInput(format!("vertex {bad} is not in the graph")));
    }
    let members: BTreeSet<AgentId> = h.iter().copied().collect();
    let list: Vec<AgentId> = members.iter().copied().collect();
    for (i, &u) in list.iter().enumerate() {
        for &v in &list[i + 1..] {
            if g.neighbors(u).intersection(g.neighbors(v)).any(|w| !members.contains(w)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Length of the shortest cycle, `None` for a forest.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        let mut touched = vec![root];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        'bfs: while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                if 2 * dist[u] + 1 >= b {
                    break 'bfs;
                }
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
        for v in touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusteringBound {
    /// Clustering coefficient of the graph.
    pub lhs: Rational,
    /// `1 / (2 d)` with `d` the average degree.
    pub rhs: Rational,
    pub holds: bool,
    /// `1 / d`, evaluated only when the minimum degree is at least 2.
    pub sharper: Option<(Rational, bool)>,
    /// No vertex of degree 2 or more; the inequality is vacuous.
    pub degenerate: bool,
}

/// Evaluates `clustering >= 1 / (2 * average degree)` exactly on a
/// connected graph.
pub fn verify_clustering_bound(g: &Graph) -> Result<ClusteringBound> {
    if !g.is_connected() {
        return Err(Error::Regime("clustering bound needs a connected graph".into()));
    }
    let lhs = clustering_coefficient(g);
    let d = average_degree(g);
    let degenerate = clustering_support(g).is_empty();
    if d.is_zero() {
        return Ok(ClusteringBound { lhs, rhs: Rational::zero(), holds: true, sharper: None, degenerate });
    }
    let rhs = (rational::int(2) * &d).recip();
    let holds = lhs >= rhs;
    let min_degree = g.degrees().into_iter().min().unwrap_or(0);
    let sharper = (min_degree >= 2).then(|| {
        let r = d.recip();
        let ok = lhs >= r;
        (r, ok)
    });
    Ok(ClusteringBound { lhs, rhs, holds, sharper, degenerate })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBound {
    pub holds: bool,
    pub average_degree: Rational,
    pub bound: Rational,
}

/// Checks `average degree <= gamma K (K + 1)` for a configuration in which
/// every agent invites at most `K` distinct agents.
pub fn verify_k_supportable_degree_bound(config: &EventConfiguration, k: usize) -> Result<DegreeBound> {
    for (v, strategy) in config.strategies.iter().enumerate() {
        let invited = strategy.invitation_rates().len();
        if invited > k {
            return Err(Error::Regime(format!("agent {v} invites {invited} agents, more than K = {k}")));
        }
    }
    let graph = crate::model::connection_graph(config);
    let average = average_degree(&graph.graph);
    let bound = config.params.gamma() * rational::from_usize(k * (k + 1));
    Ok(DegreeBound { holds: average <= bound, average_degree: average, bound })
}

/// Largest number of distinct invitees of any agent.
pub fn max_invitees(config: &EventConfiguration) -> usize {
    config
        .strategies
        .iter()
        .map(|s| s.invitation_rates().len())
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub n: usize,
    pub edge_count: usize,
    pub degree_sequence: Vec<usize>,
    pub average_degree: Rational,
    pub average_degree_over_support: Rational,
    pub clustering: Rational,
    pub triangle_counts: Vec<usize>,
    pub local_bridges: Vec<(AgentId, AgentId)>,
    pub girth: Option<usize>,
    pub connected: bool,
}

pub fn graph_stats(g: &Graph) -> GraphStats {
    GraphStats {
        n: g.n(),
        edge_count: g.edge_count(),
        degree_sequence: g.degrees(),
        average_degree: average_degree(g),
        average_degree_over_support: average_degree_over_support(g),
        clustering: clustering_coefficient(g),
        triangle_counts: triangle_counts(g),
        local_bridges: local_bridges(g),
        girth: girth(g),
        connected: g.is_connected(),
    }
}
