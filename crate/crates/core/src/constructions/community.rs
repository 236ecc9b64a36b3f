//! Networks of cliques joined by bridges, shared vertices, or shared
//! groups of vertices.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{connection_graph, AgentId, EventConfiguration, Parameters};
use crate::rational::{self, Rational};
use crate::stability::{check_stability_deviation, realize_nested};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JoinMode {
    /// One member of each clique; the two invite each other at rate 1/2.
    Bridge,
    /// The cliques share one vertex.
    SharedVertex,
    /// The cliques share `p` vertices, which host nothing.
    Overlap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Join {
    pub a: usize,
    pub b: usize,
    pub mode: JoinMode,
    /// Number of shared vertices for `overlap`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    /// First slot used in clique `a` and in clique `b`; lowest free slots
    /// are used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slots: Option<[usize; 2]>,
}

impl Join {
    pub fn new(a: usize, b: usize, mode: JoinMode) -> Self {
        Self { a, b, mode, p: None, slots: None }
    }

    pub fn overlap(a: usize, b: usize, p: usize) -> Self {
        Self { a, b, mode: JoinMode::Overlap, p: Some(p), slots: None }
    }

    pub fn at_slots(mut self, slot_a: usize, slot_b: usize) -> Self {
        self.slots = Some([slot_a, slot_b]);
        self
    }

    fn width(&self) -> usize {
        match self.mode {
            JoinMode::Overlap => self.p.unwrap_or(1),
            _ => 1,
        }
    }
}

/// A skeleton graph whose nodes are cliques of the given sizes and whose
/// edges say how neighbouring cliques are joined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommunitySkeleton {
    pub clique_sizes: Vec<usize>,
    #[serde(default)]
    pub joins: Vec<Join>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityNetwork {
    pub config: EventConfiguration,
    /// Agents of each clique, in slot order.
    pub cliques: Vec<Vec<AgentId>>,
    pub bridges: Vec<(AgentId, AgentId)>,
    /// Agents hosting inside each clique.
    pub hosts: Vec<Vec<AgentId>>,
}

impl CommunityNetwork {
    /// Clique edges plus bridge edges.
    pub fn expected_graph(&self) -> Graph {
        let mut g = Graph::new(self.config.n());
        for clique in &self.cliques {
            for (i, &u) in clique.iter().enumerate() {
                for &v in &clique[i + 1..] {
                    g.add_edge(u, v);
                }
            }
        }
        for &(u, v) in &self.bridges {
            g.add_edge(u, v);
        }
        g
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Agents, cliques and bridges of a skeleton, before any rates are chosen.
fn lay_out(skeleton: &CommunitySkeleton) -> Result<(usize, Vec<Vec<AgentId>>, Vec<(AgentId, AgentId)>, BTreeSet<AgentId>)> {
    let sizes = &skeleton.clique_sizes;
    if sizes.is_empty() {
        return Err(Error::InvalidInput("skeleton has no cliques".into()));
    }
    if let Some(i) = sizes.iter().position(|&h| h < 2) {
        return Err(Error::InvalidInput(format!("clique {i} has fewer than 2 vertices")));
    }
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &h| {
            let start = *acc;
            *acc += h;
            Some(start)
        })
        .collect();
    let total: usize = sizes.iter().sum();
    let mut used: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); sizes.len()];
    let mut uf = UnionFind::new(total);
    let mut bridge_slots = Vec::new();
    let mut overlap_slots = Vec::new();
    let mut seen_pairs = BTreeSet::new();
    for (j, join) in skeleton.joins.iter().enumerate() {
        let (a, b) = (join.a, join.b);
        if a >= sizes.len() || b >= sizes.len() || a == b {
            return Err(Error::InvalidInput(format!("join {j} connects invalid cliques ({a}, {b})")));
        }
        if !seen_pairs.insert((a.min(b), a.max(b))) {
            return Err(Error::InvalidInput(format!("cliques {a} and {b} are joined twice")));
        }
        let width = join.width();
        if width == 0 {
            return Err(Error::InvalidInput(format!("join {j} overlaps in zero vertices")));
        }
        let mut pick = |clique: usize, explicit: Option<usize>| -> Result<Vec<usize>> {
            let slots: Vec<usize> = match explicit {
                Some(start) => (start..start + width).collect(),
                None => (0..sizes[clique]).filter(|s| !used[clique].contains(s)).take(width).collect(),
            };
            if slots.len() < width || slots.iter().any(|&s| s >= sizes[clique]) {
                return Err(Error::Construction(format!(
                    "clique {clique} has no room for join {j} (size {})",
                    sizes[clique]
                )));
            }
            used[clique].extend(slots.iter().copied());
            Ok(slots.into_iter().map(|s| offsets[clique] + s).collect())
        };
        let sa = pick(a, join.slots.map(|s| s[0]))?;
        let sb = pick(b, join.slots.map(|s| s[1]))?;
        match join.mode {
            JoinMode::Bridge => bridge_slots.push((sa[0], sb[0])),
            JoinMode::SharedVertex | JoinMode::Overlap => {
                for (&x, &y) in sa.iter().zip(&sb) {
                    uf.union(x, y);
                }
                if join.mode == JoinMode::Overlap && width > 1 {
                    overlap_slots.extend(sa.iter().copied());
                }
            }
        }
    }
    let mut agent_of_root: BTreeMap<usize, AgentId> = BTreeMap::new();
    let mut agent_of_slot = vec![0; total];
    for slot in 0..total {
        let root = uf.find(slot);
        let next = agent_of_root.len();
        agent_of_slot[slot] = *agent_of_root.entry(root).or_insert(next);
    }
    let cliques: Vec<Vec<AgentId>> = sizes
        .iter()
        .zip(&offsets)
        .map(|(&h, &start)| (start..start + h).map(|s| agent_of_slot[s]).collect())
        .collect();
    for (i, clique) in cliques.iter().enumerate() {
        let distinct: BTreeSet<_> = clique.iter().collect();
        if distinct.len() != clique.len() {
            return Err(Error::Construction(format!("clique {i} is glued to itself through shared vertices")));
        }
    }
    let bridges: Vec<(AgentId, AgentId)> = bridge_slots
        .into_iter()
        .map(|(x, y)| {
            let (u, v) = (agent_of_slot[x], agent_of_slot[y]);
            (u.min(v), u.max(v))
        })
        .collect();
    let mut bridge_count: BTreeMap<AgentId, usize> = BTreeMap::new();
    for &(u, v) in &bridges {
        if u == v {
            return Err(Error::Construction(format!("bridge joins agent {u} to itself")));
        }
        for x in [u, v] {
            *bridge_count.entry(x).or_default() += 1;
        }
    }
    if let Some((&agent, _)) = bridge_count.iter().find(|(_, &c)| c > 1) {
        return Err(Error::Construction(format!(
            "agent {agent} would carry two mutual-1/2 bridges; a stable network has at most one per agent"
        )));
    }
    let overlapping: BTreeSet<AgentId> = overlap_slots.into_iter().map(|s| agent_of_slot[s]).collect();
    Ok((agent_of_root.len(), cliques, bridges, overlapping))
}

/// Builds a stable configuration whose connection graph is the clique
/// expansion of `skeleton`.
///
/// Each clique is supported by its hosting members at rate
/// `1/(number of hosts)`. Vertices in several cliques, or carrying a
/// bridge, host only while the rate at which their nested events make
/// non-adjacent neighbours meet stays below `1 - gamma`; otherwise they
/// stop hosting in their cliques. Vertices of multi-vertex overlaps never
/// host. The result is checked for exact stability before it is returned.
pub fn build_community_graph(params: &Parameters, skeleton: &CommunitySkeleton) -> Result<CommunityNetwork> {
    let gamma = params.gamma();
    if gamma > Rational::one() {
        return Err(Error::Regime(format!(
            "clique networks need gamma <= 1, got {}",
            rational::format(&gamma)
        )));
    }
    let (n, cliques, bridges, overlapping) = lay_out(skeleton)?;
    if !bridges.is_empty() && gamma <= rational::ratio(1, 2) {
        return Err(Error::Regime(format!(
            "bridges need gamma > 1/2, got {}",
            rational::format(&gamma)
        )));
    }
    let mut membership: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, clique) in cliques.iter().enumerate() {
        for &v in clique {
            membership[v].push(i);
        }
    }
    let mut partner: BTreeMap<AgentId, AgentId> = BTreeMap::new();
    for &(u, v) in &bridges {
        partner.insert(u, v);
        partner.insert(v, u);
    }
    let mut hosting: Vec<bool> = (0..n).map(|v| !overlapping.contains(&v)).collect();
    let half = rational::ratio(1, 2);
    loop {
        let host_counts: Vec<usize> =
            cliques.iter().map(|c| c.iter().filter(|&&v| hosting[v]).count()).collect();
        for (i, &h) in host_counts.iter().enumerate() {
            if h == 0 {
                return Err(Error::Regime(format!("clique {i} has no hosting member left")));
            }
            let rate = rational::ratio(1, h as i64);
            if gamma <= rate {
                return Err(Error::Regime(format!(
                    "clique {i} with {h} hosts needs gamma > {}, got {}",
                    rational::format(&rate),
                    rational::format(&gamma)
                )));
            }
        }
        let mut changed = false;
        for v in 0..n {
            if !hosting[v] {
                continue;
            }
            let mut group_rates: Vec<Rational> =
                membership[v].iter().map(|&i| rational::ratio(1, host_counts[i] as i64)).collect();
            if partner.contains_key(&v) {
                group_rates.push(half.clone());
            }
            if group_rates.len() < 2 {
                continue;
            }
            group_rates.sort();
            // Two groups meet through v at the smaller of their rates; the
            // largest such rate comes from the two largest group rates.
            let cross = group_rates[group_rates.len() - 2].clone();
            if gamma >= Rational::one() - cross {
                hosting[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let host_counts: Vec<usize> = cliques.iter().map(|c| c.iter().filter(|&&v| hosting[v]).count()).collect();
    let mut config = EventConfiguration::empty(params.with_n(n));
    for v in 0..n {
        let mut targets: BTreeMap<AgentId, Rational> = BTreeMap::new();
        if hosting[v] {
            for &i in &membership[v] {
                let rate = rational::ratio(1, host_counts[i] as i64);
                for &u in cliques[i].iter().filter(|&&u| u != v) {
                    let entry = targets.entry(u).or_insert_with(|| rate.clone());
                    if *entry < rate {
                        *entry = rate.clone();
                    }
                }
            }
        }
        if let Some(&w) = partner.get(&v) {
            targets.insert(w, half.clone());
        }
        config.set_strategy(v, realize_nested(&targets, v)?);
    }
    let hosts: Vec<Vec<AgentId>> =
        cliques.iter().map(|c| c.iter().copied().filter(|&v| hosting[v]).collect()).collect();
    let network = CommunityNetwork { config, cliques, bridges, hosts };
    let induced = connection_graph(&network.config);
    if induced.graph != network.expected_graph() {
        return Err(Error::Construction("induced network differs from the clique expansion".into()));
    }
    let report = check_stability_deviation(&network.config);
    if let Some(first) = report.violations.first() {
        return Err(Error::Construction(format!(
            "no stable support found for this skeleton at gamma = {}: {}",
            rational::format(&gamma),
            first.detail
        )));
    }
    Ok(network)
}
