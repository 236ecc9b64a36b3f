//! Realizes a degree sequence as a connected stable network in which every
//! agent invites at most `K + 3` others.
//!
//! The pipeline: degree-2 vertices are paired into triangles hanging off
//! the current highest-degree vertex; class sizes are rounded; vertices of
//! residual degree above `K + 3` absorb whole cliques of low-degree hosts;
//! each remaining degree class becomes either a chain of bridged cliques or
//! the clique expansion of a girth-5 regular graph; consecutive classes are
//! linked by bridges; degree-1 vertices hang off bridge-free vertices.
//! Every change to a vertex's degree target is logged.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{connection_graph, AgentId, EventConfiguration, Parameters};
use crate::rational::{self, Rational};
use crate::stability::{check_stability_deviation, realize_nested};

use super::girth::{gen_regular_girth5, min_girth5_order};
use super::validate::{condition_one, validate_sequence};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepEntry {
    pub step: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<AgentId>,
    pub delta: i64,
    /// Set on shifts outside the per-step budget.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub fallback: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationReport {
    pub config: EventConfiguration,
    pub target: Vec<usize>,
    /// Target after every logged shift; equals `achieved` on success.
    pub adjusted: Vec<usize>,
    pub achieved: Vec<usize>,
    pub l1_shift: usize,
    pub k_used: usize,
    /// Upper bound on the shift allowed by the per-step allowances.
    pub budget: usize,
    /// Shift caused by fallback entries (outside the budget).
    pub fallback_shift: usize,
    /// Girth-5 generator order floor used for each degree class.
    pub girth_orders: BTreeMap<usize, usize>,
    pub step_log: Vec<StepEntry>,
}

impl RealizationReport {
    pub fn max_invitees(&self) -> usize {
        crate::metrics::max_invitees(&self.config)
    }

    /// Vertices whose achieved degree differs from the input.
    pub fn shifted_vertices(&self) -> BTreeSet<AgentId> {
        (0..self.target.len()).filter(|&v| self.target[v] != self.achieved[v]).collect()
    }

    /// Vertices with at least one non-zero logged shift.
    pub fn logged_vertices(&self) -> BTreeSet<AgentId> {
        self.step_log.iter().filter(|e| e.delta != 0).filter_map(|e| e.vertex).collect()
    }

    /// Net logged shift per vertex.
    pub fn logged_deltas(&self) -> BTreeMap<AgentId, i64> {
        let mut out = BTreeMap::new();
        for entry in &self.step_log {
            if let Some(v) = entry.vertex {
                *out.entry(v).or_insert(0) += entry.delta;
            }
        }
        out
    }
}

enum Structure {
    /// Cliques of size `k + 1` (or 3) chained by bridges.
    Blocks { ports: VecDeque<AgentId> },
    /// Clique expansion of a regular girth-5 graph.
    Expansion { breakable: VecDeque<(AgentId, AgentId)>, freed: VecDeque<AgentId> },
}

struct Builder {
    k_cap: usize,
    target: Vec<i64>,
    residual: Vec<i64>,
    free: Vec<bool>,
    rates: Vec<BTreeMap<AgentId, Rational>>,
    bridge: Vec<Option<AgentId>>,
    pendants: VecDeque<AgentId>,
    log: Vec<StepEntry>,
    budget: usize,
    girth_orders: BTreeMap<usize, usize>,
}

impl Builder {
    fn note(&mut self, step: &str, detail: String) {
        self.log.push(StepEntry { step: step.into(), vertex: None, delta: 0, fallback: false, detail });
    }

    fn shift(&mut self, v: AgentId, delta: i64, step: &str, detail: &str, fallback: bool) {
        self.target[v] += delta;
        self.residual[v] += delta;
        self.log.push(StepEntry { step: step.into(), vertex: Some(v), delta, fallback, detail: detail.into() });
    }

    fn invite(&mut self, host: AgentId, guest: AgentId, rate: Rational) -> Result<()> {
        if self.rates[host].insert(guest, rate).is_some() {
            return Err(Error::Invariant(format!("agent {host} invites {guest} twice")));
        }
        Ok(())
    }

    fn clique(&mut self, members: &[AgentId]) -> Result<()> {
        let rate = rational::ratio(1, members.len() as i64);
        for &v in members {
            for &u in members.iter().filter(|&&u| u != v) {
                self.invite(v, u, rate.clone())?;
            }
        }
        Ok(())
    }

    fn link(&mut self, u: AgentId, v: AgentId) -> Result<()> {
        if let Some(x) = [u, v].into_iter().find(|&x| self.bridge[x].is_some()) {
            return Err(Error::Invariant(format!("agent {x} would carry a second bridge")));
        }
        let half = rational::ratio(1, 2);
        self.invite(u, v, half.clone())?;
        self.invite(v, u, half)?;
        self.bridge[u] = Some(v);
        self.bridge[v] = Some(u);
        Ok(())
    }

    fn unlink(&mut self, u: AgentId, v: AgentId) {
        self.rates[u].remove(&v);
        self.rates[v].remove(&u);
        self.bridge[u] = None;
        self.bridge[v] = None;
    }

    fn consume(&mut self, v: AgentId) {
        self.free[v] = false;
        self.residual[v] = 0;
    }

    fn free_with_residual(&self, k: i64, exclude: AgentId) -> Vec<AgentId> {
        (0..self.target.len())
            .filter(|&v| self.free[v] && v != exclude && self.residual[v] == k)
            .collect()
    }

    /// Pairs degree-2 vertices into triangles with the current
    /// highest-residual vertex while that vertex keeps residual >= 3.
    fn handle_twos(&mut self) -> Result<()> {
        let mut twos: VecDeque<AgentId> = (0..self.target.len()).filter(|&v| self.residual[v] == 2).collect();
        let half = rational::ratio(1, 2);
        while twos.len() >= 2 {
            let w = (0..self.target.len())
                .filter(|&x| self.free[x] && self.residual[x] >= 3)
                .max_by(|&a, &b| self.residual[a].cmp(&self.residual[b]).then(b.cmp(&a)));
            let Some(w) = w.filter(|&w| self.residual[w] >= 5) else { break };
            let u = twos.pop_front().expect("two left");
            let v = twos.pop_front().expect("two left");
            self.invite(u, v, half.clone())?;
            self.invite(u, w, half.clone())?;
            self.invite(v, u, half.clone())?;
            self.invite(v, w, half.clone())?;
            self.consume(u);
            self.consume(v);
            self.residual[w] -= 2;
        }
        self.budget += 1;
        let fallback = twos.len() >= 2;
        while let Some(v) = twos.pop_front() {
            let detail = if fallback {
                "no vertex of residual >= 5 left to pair with; promoted to 3"
            } else {
                "single unpaired degree-2 vertex promoted to 3"
            };
            self.shift(v, 1, "step1-promote", detail, fallback);
        }
        Ok(())
    }

    /// Makes each low class size a multiple of its degree by demoting the
    /// surplus to the class below.
    fn round_classes(&mut self) {
        let k_cap = self.k_cap as i64;
        for k in (4..=k_cap).rev() {
            self.budget += (k - 1) as usize;
            let class = self.free_with_residual(k, usize::MAX);
            let surplus = class.len() % k as usize;
            for &v in class.iter().rev().take(surplus) {
                self.shift(v, -1, "step2-round", &format!("class {k} size rounded to a multiple of {k}"), false);
            }
        }
        let threes = self.free_with_residual(3, usize::MAX).len();
        if !threes.is_multiple_of(3) {
            self.note("step2-round", format!("class 3 keeps a remainder of {}", threes % 3));
        }
        let current: Vec<usize> = self.target.iter().map(|&d| d.max(0) as usize).collect();
        let (low, high) = condition_one(&current, self.k_cap);
        self.note(
            "step2-recheck",
            format!("after rounding: {low} low vertices vs high-degree sum {high} (holds: {})", low >= high),
        );
    }

    /// Absorbs residual degree above `K + 3` into cliques of low-degree hosts.
    fn absorb_high(&mut self) -> Result<()> {
        let limit = self.k_cap as i64 + 3;
        let high: Vec<AgentId> =
            (0..self.target.len()).filter(|&v| self.free[v] && self.residual[v] > limit).collect();
        for v in high {
            while self.residual[v] > limit {
                let mut done = false;
                for k in 3..=self.k_cap {
                    let class = self.free_with_residual(k as i64, v);
                    if k >= 4 && self.pendants.len() >= k - 1 && class.len() >= k - 1 {
                        let hosts: Vec<AgentId> = class[..k - 1].to_vec();
                        let mut members = hosts.clone();
                        members.push(v);
                        let rate = rational::ratio(1, (k - 1) as i64);
                        for &h in &hosts {
                            for &u in members.iter().filter(|&&u| u != h) {
                                self.invite(h, u, rate.clone())?;
                            }
                            let p = self.pendants.pop_front().expect("counted");
                            self.link(h, p)?;
                            self.consume(h);
                            self.consume(p);
                        }
                        self.residual[v] -= (k - 1) as i64;
                        done = true;
                        break;
                    }
                    if class.len() >= k {
                        let hosts: Vec<AgentId> = class[..k].to_vec();
                        let mut members = hosts.clone();
                        members.push(v);
                        let rate = rational::ratio(1, k as i64);
                        for &h in &hosts {
                            for &u in members.iter().filter(|&&u| u != h) {
                                self.invite(h, u, rate.clone())?;
                            }
                            self.consume(h);
                        }
                        self.residual[v] -= k as i64;
                        done = true;
                        break;
                    }
                }
                if !done {
                    let excess = self.residual[v] - limit;
                    self.shift(v, -excess, "step2-clamp", "no low-degree class left to absorb into", true);
                }
            }
        }
        Ok(())
    }

    fn pendantize(&mut self, v: AgentId, step: &str) {
        let delta = 1 - self.target[v];
        self.shift(v, delta, step, "too few vertices left in class 3; attached as a pendant", false);
        self.free[v] = false;
        self.residual[v] = 0;
        self.pendants.push_back(v);
    }

    fn build_classes(&mut self, seed: u64) -> Result<Vec<Structure>> {
        let top = self.k_cap + 3;
        let mut classes: BTreeMap<usize, Vec<AgentId>> = BTreeMap::new();
        for v in 0..self.target.len() {
            if !self.free[v] {
                continue;
            }
            let r = self.residual[v];
            if r < 3 || r as usize > top {
                return Err(Error::Invariant(format!("agent {v} reaches the class step with residual {r}")));
            }
            classes.entry(r as usize).or_default().push(v);
        }
        let mut structures = Vec::new();
        let mut carry: Vec<AgentId> = Vec::new();
        for k in (3..=top).rev() {
            let mut members = classes.remove(&k).unwrap_or_default();
            members.append(&mut carry);
            members.sort_unstable();
            if members.is_empty() {
                continue;
            }
            let m = members.len();
            let nk = min_girth5_order(k);
            self.girth_orders.insert(k, nk);
            if m >= k * (nk + 1) {
                let mut count = m / k;
                if (count * k) % 2 == 1 {
                    count -= 1;
                }
                self.note("step3", format!("class {k}: {m} vertices, clique expansion of a girth-5 graph on {count}"));
                self.budget += if k == 3 { 2 * (2 * k - 1) } else { 2 * k - 1 };
                for &v in &members[count * k..] {
                    if k > 3 {
                        self.shift(v, -1, "step3-carry", &format!("left over from class {k}"), false);
                        carry.push(v);
                    } else {
                        self.pendantize(v, "step3-orphan");
                    }
                }
                let h = gen_regular_girth5(k, count, seed.wrapping_mul(0x9E37_79B9).wrapping_add(k as u64))?;
                let cliques: Vec<Vec<AgentId>> = members[..count * k].chunks(k).map(<[AgentId]>::to_vec).collect();
                for clique in &cliques {
                    self.clique(clique)?;
                }
                let mut next_slot = vec![0usize; count];
                let mut agents_of_edge = BTreeMap::new();
                for (i, j) in h.graph.edges() {
                    let a = cliques[i][next_slot[i]];
                    let b = cliques[j][next_slot[j]];
                    next_slot[i] += 1;
                    next_slot[j] += 1;
                    self.link(a, b)?;
                    agents_of_edge.insert((i, j), (a, b));
                }
                let tree = spanning_tree(&h.graph);
                let breakable = agents_of_edge
                    .iter()
                    .filter(|(e, _)| !tree.contains(e))
                    .map(|(_, &pair)| pair)
                    .collect();
                for &v in &members[..count * k] {
                    self.consume(v);
                }
                structures.push(Structure::Expansion { breakable, freed: VecDeque::new() });
            } else if k == top || (k > 3 && m < k + 1) {
                self.budget += m;
                for v in members {
                    self.shift(v, -1, "step3-carry", &format!("class {k} too small for bridged cliques"), false);
                    carry.push(v);
                }
            } else {
                let blocks_count = m / (k + 1);
                let rest = m - blocks_count * (k + 1);
                let mut blocks: Vec<Vec<AgentId>> =
                    members[..blocks_count * (k + 1)].chunks(k + 1).map(<[AgentId]>::to_vec).collect();
                let leftover: Vec<AgentId> = members[blocks_count * (k + 1)..].to_vec();
                if k > 3 {
                    self.budget += k;
                    for v in leftover {
                        self.shift(v, -1, "step3-carry", &format!("remainder of class {k}"), false);
                        carry.push(v);
                    }
                } else {
                    self.budget += 4;
                    if rest == 3 {
                        for &v in &leftover {
                            self.shift(v, -1, "step3-triangle", "class-3 remainder closed as a triangle", false);
                        }
                        blocks.push(leftover);
                    } else {
                        for v in leftover {
                            self.pendantize(v, "step3-orphan");
                        }
                    }
                }
                if blocks.is_empty() {
                    continue;
                }
                self.note("step3", format!("class {k}: {m} vertices, {} bridged cliques", blocks.len()));
                for block in &blocks {
                    self.clique(block)?;
                }
                let mut endpoints = BTreeSet::new();
                for j in 0..blocks.len() - 1 {
                    let u = *blocks[j].last().expect("non-empty block");
                    let v = blocks[j + 1][0];
                    self.link(u, v)?;
                    self.shift(u, 1, "step3-chain", "chain bridge between consecutive cliques", false);
                    self.shift(v, 1, "step3-chain", "chain bridge between consecutive cliques", false);
                    endpoints.insert(u);
                    endpoints.insert(v);
                }
                self.budget += 2 * (blocks.len() - 1) + m;
                let ports = blocks.iter().flatten().copied().filter(|v| !endpoints.contains(v)).collect();
                for v in blocks.iter().flatten().copied().collect::<Vec<_>>() {
                    self.consume(v);
                }
                structures.push(Structure::Blocks { ports });
            }
        }
        if !carry.is_empty() {
            return Err(Error::Invariant("vertices carried below class 3".into()));
        }
        Ok(structures)
    }

    fn take_port(&mut self, s: &mut Structure, step: &str) -> Result<AgentId> {
        match s {
            Structure::Blocks { ports } => {
                let v = ports.pop_front().ok_or_else(|| Error::Invariant("bridged cliques ran out of ports".into()))?;
                self.shift(v, 1, step, "bridge to a neighbouring structure", false);
                Ok(v)
            }
            Structure::Expansion { breakable, freed } => {
                if freed.is_empty() {
                    let (a, b) = breakable
                        .pop_front()
                        .ok_or_else(|| Error::Invariant("no cycle edge left to break".into()))?;
                    self.unlink(a, b);
                    freed.push_back(a);
                    freed.push_back(b);
                }
                Ok(freed.pop_front().expect("just filled"))
            }
        }
    }

    fn connect(&mut self, structures: &mut [Structure]) -> Result<()> {
        for i in 1..structures.len() {
            self.budget += 2;
            let (left, right) = structures.split_at_mut(i);
            let u = self.take_port(&mut left[i - 1], "step4-link")?;
            let v = self.take_port(&mut right[0], "step4-link")?;
            self.link(u, v)?;
        }
        Ok(())
    }

    fn attach_pendants(&mut self, structures: &mut [Structure]) -> Result<()> {
        // Exact attachments first: freed expansion vertices, then broken cycle edges.
        for s in structures.iter_mut() {
            if let Structure::Expansion { freed, .. } = s {
                while !self.pendants.is_empty() {
                    let Some(host) = freed.pop_front() else { break };
                    let p = self.pendants.pop_front().expect("non-empty");
                    self.link(host, p)?;
                }
            }
        }
        let block_capacity: usize = structures
            .iter()
            .map(|s| match s {
                Structure::Blocks { ports } => ports.len(),
                Structure::Expansion { .. } => 0,
            })
            .sum();
        for s in structures.iter_mut() {
            if let Structure::Expansion { breakable, freed } = s {
                while self.pendants.len() >= 2 || (self.pendants.len() == 1 && block_capacity == 0) {
                    let Some((a, b)) = breakable.pop_front() else { break };
                    self.unlink(a, b);
                    for host in [a, b] {
                        match self.pendants.pop_front() {
                            Some(p) => self.link(host, p)?,
                            None => freed.push_back(host),
                        }
                    }
                }
            }
        }
        for s in structures.iter_mut() {
            if let Structure::Blocks { ports } = s {
                while !self.pendants.is_empty() {
                    let Some(host) = ports.pop_front() else { break };
                    let p = self.pendants.pop_front().expect("non-empty");
                    self.shift(host, 1, "pendant-attach", "degree-1 vertex attached", false);
                    self.link(host, p)?;
                }
            }
        }
        if let Some(&p) = self.pendants.front() {
            return Err(Error::Infeasible(format!(
                "{} degree-1 vertices (first: {p}) found no bridge-free host",
                self.pendants.len()
            )));
        }
        self.budget += 1;
        for s in structures.iter_mut() {
            if let Structure::Expansion { freed, .. } = s {
                while let Some(v) = freed.pop_front() {
                    self.shift(v, -1, "step4-unused-port", "freed by a broken bridge but left unused", false);
                }
            }
        }
        Ok(())
    }
}

fn spanning_tree(g: &crate::graph::Graph) -> BTreeSet<(usize, usize)> {
    let mut tree = BTreeSet::new();
    let mut seen = vec![false; g.n()];
    for root in 0..g.n() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    tree.insert((u.min(w), u.max(w)));
                    queue.push_back(w);
                }
            }
        }
    }
    tree
}

/// Runs the full pipeline. `params.b` should be infinitesimal; the output is
/// verified to be connected, stable and to match the logged degree targets.
pub fn realize(degrees: &[usize], params: &Parameters, seed: u64) -> Result<RealizationReport> {
    let gamma = params.gamma();
    let diagnostics = validate_sequence(degrees, &gamma)?;
    let n = degrees.len();
    let k_cap = diagnostics.k;
    let mut b = Builder {
        k_cap,
        target: degrees.iter().map(|&d| d as i64).collect(),
        residual: degrees.iter().map(|&d| d as i64).collect(),
        free: vec![true; n],
        rates: vec![BTreeMap::new(); n],
        bridge: vec![None; n],
        pendants: VecDeque::new(),
        log: Vec::new(),
        budget: 0,
        girth_orders: BTreeMap::new(),
    };
    b.note("validate", format!("K = {k_cap}; {} degree-1, {} degree-2 vertices", diagnostics.ones, diagnostics.twos));
    for v in 0..n {
        if degrees[v] == 1 {
            b.pendants.push_back(v);
            b.free[v] = false;
            b.residual[v] = 0;
        }
    }
    b.handle_twos()?;
    b.round_classes();
    b.absorb_high()?;
    let mut structures = b.build_classes(seed)?;
    b.connect(&mut structures)?;
    b.attach_pendants(&mut structures)?;

    let mut config = EventConfiguration::empty(params.with_n(n));
    for v in 0..n {
        config.set_strategy(v, realize_nested(&b.rates[v], v)?);
    }
    let graph = connection_graph(&config);
    let achieved = graph.graph.degrees();
    let adjusted: Vec<usize> = b.target.iter().map(|&d| d.max(0) as usize).collect();
    if let Some(v) = (0..n).find(|&v| achieved[v] != adjusted[v]) {
        return Err(Error::Invariant(format!(
            "agent {v} has degree {} but the logged target is {}",
            achieved[v], adjusted[v]
        )));
    }
    if !graph.graph.is_connected() {
        return Err(Error::Invariant("realized network is disconnected".into()));
    }
    let report = check_stability_deviation(&config);
    if let Some(first) = report.violations.first() {
        return Err(Error::Invariant(format!("realized network is unstable: {}", first.detail)));
    }
    let l1_shift = (0..n).map(|v| degrees[v].abs_diff(achieved[v])).sum();
    let fallback_shift = b.log.iter().filter(|e| e.fallback).map(|e| e.delta.unsigned_abs() as usize).sum();
    Ok(RealizationReport {
        config,
        target: degrees.to_vec(),
        adjusted,
        achieved,
        l1_shift,
        k_used: k_cap,
        budget: b.budget,
        fallback_shift,
        girth_orders: b.girth_orders,
        step_log: b.log,
    })
}
