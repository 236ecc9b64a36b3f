//! Clique networks built from random regular uniform hypergraphs.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AgentId, EventConfiguration, Parameters};
use crate::rational::{self, Rational};
use crate::stability::realize_nested;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypergraphSampler {
    /// Each new hyperedge avoids vertices within distance 3 of its other
    /// vertices (in the graph of earlier hyperedges) whenever possible.
    #[default]
    GirthAware,
    /// Vertices drawn with probability proportional to remaining degree.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphSpec {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub seed: u64,
    #[serde(default)]
    pub sampler: HypergraphSampler,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergraphNetwork {
    pub config: EventConfiguration,
    pub hyperedges: Vec<Vec<AgentId>>,
    /// Indices of hyperedges dropped because they lie on a short cycle.
    pub removed: Vec<usize>,
}

impl HypergraphNetwork {
    pub fn m(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn removed_fraction(&self) -> f64 {
        self.removed.len() as f64 / self.m().max(1) as f64
    }

    pub fn kept(&self) -> Vec<&Vec<AgentId>> {
        let removed: BTreeSet<usize> = self.removed.iter().copied().collect();
        self.hyperedges
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, e)| e)
            .collect()
    }
}

const MAX_RESTARTS: usize = 50;
const PICK_ATTEMPTS: usize = 64;

/// Samples a `d`-regular `k`-uniform hypergraph on `n` vertices without
/// repeated vertices inside a hyperedge.
pub fn sample_regular_hypergraph(spec: &HypergraphSpec) -> Result<Vec<Vec<AgentId>>> {
    let HypergraphSpec { n, k, d, seed, sampler } = *spec;
    if k < 2 || d == 0 || n < k {
        return Err(Error::InvalidInput(format!("need k >= 2, d >= 1, n >= k; got n={n}, k={k}, d={d}")));
    }
    if (d * n) % k != 0 {
        return Err(Error::InvalidInput(format!("d*n = {} is not divisible by k = {k}", d * n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RESTARTS {
        if let Some(edges) = sample_once(n, k, d, sampler, &mut rng) {
            return Ok(edges);
        }
    }
    Err(Error::Infeasible(format!(
        "no {d}-regular {k}-uniform hypergraph on {n} vertices after {MAX_RESTARTS} attempts"
    )))
}

fn sample_once(n: usize, k: usize, d: usize, sampler: HypergraphSampler, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<AgentId>>> {
    let m = d * n / k;
    // Stub list: vertex v appears once per unit of remaining degree.
    let mut stubs: Vec<AgentId> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut adjacency: Vec<Vec<AgentId>> = vec![Vec::new(); n];
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let mut chosen: Vec<AgentId> = Vec::with_capacity(k);
        let mut blocked: HashSet<AgentId> = HashSet::new();
        for _ in 0..k {
            let mut pick = None;
            for _ in 0..PICK_ATTEMPTS {
                let v = stubs[rng.gen_range(0..stubs.len())];
                if chosen.contains(&v) {
                    continue;
                }
                if sampler == HypergraphSampler::GirthAware && blocked.contains(&v) {
                    continue;
                }
                pick = Some(v);
                break;
            }
            let v = match pick {
                Some(v) => v,
                None => {
                    let mut pool: Vec<AgentId> = stubs.iter().copied().filter(|v| !chosen.contains(v)).collect();
                    pool.sort_unstable();
                    pool.dedup();
                    let clear: Vec<AgentId> = pool.iter().copied().filter(|v| !blocked.contains(v)).collect();
                    let source = if clear.is_empty() { &pool } else { &clear };
                    *source.choose(rng)?
                }
            };
            if sampler == HypergraphSampler::GirthAware {
                blocked.extend(ball(&adjacency, v, 3));
            }
            chosen.push(v);
        }
        for &v in &chosen {
            let at = stubs.iter().position(|&s| s == v).expect("chosen vertex has a stub");
            stubs.swap_remove(at);
        }
        for (i, &u) in chosen.iter().enumerate() {
            for &v in &chosen[i + 1..] {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        chosen.sort_unstable();
        edges.push(chosen);
    }
    Some(edges)
}

/// Vertices within `radius` of `v`.
fn ball(adjacency: &[Vec<AgentId>], v: AgentId, radius: usize) -> Vec<AgentId> {
    let mut dist: BTreeMap<AgentId, usize> = BTreeMap::from([(v, 0)]);
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == radius {
            continue;
        }
        for &w in &adjacency[u] {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist.into_keys().collect()
}

/// Hyperedges sharing two or more vertices with another hyperedge or lying
/// on a cycle through at most four hyperedges.
pub fn short_cycle_hyperedges(n: usize, hyperedges: &[Vec<AgentId>]) -> Vec<usize> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in hyperedges.iter().enumerate() {
        for &v in e {
            incident[v].push(i);
        }
    }
    (0..hyperedges.len())
        .filter(|&i| on_short_cycle(i, hyperedges, &incident))
        .collect()
}

/// Searches the vertex/hyperedge incidence graph from every vertex of
/// hyperedge `e` at once, never re-entering `e`, for two search fronts
/// with different origins meeting within total length 6.
fn on_short_cycle(e: usize, hyperedges: &[Vec<AgentId>], incident: &[Vec<usize>]) -> bool {
    const LIMIT: usize = 6;
    // Incidence nodes: vertices as (false, v), hyperedges as (true, i).
    let mut label: BTreeMap<(bool, usize), (usize, usize)> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &v in &hyperedges[e] {
        label.insert((false, v), (v, 0));
        queue.push_back((false, v));
    }
    while let Some(node) = queue.pop_front() {
        let (origin, dist) = label[&node];
        let next: Vec<(bool, usize)> = match node {
            (false, v) => incident[v].iter().filter(|&&f| f != e).map(|&f| (true, f)).collect(),
            (true, f) => hyperedges[f].iter().map(|&v| (false, v)).collect(),
        };
        for nb in next {
            match label.get(&nb) {
                Some(&(other, d)) => {
                    if other != origin && dist + 1 + d <= LIMIT {
                        return true;
                    }
                }
                None => {
                    if dist < LIMIT / 2 {
                        label.insert(nb, (origin, dist + 1));
                        queue.push_back(nb);
                    }
                }
            }
        }
    }
    false
}

/// Every vertex hosts one event inviting all its clique-mates at `rate`.
pub fn host_clique_union(config: &mut EventConfiguration, cliques: &[&Vec<AgentId>], rate: &Rational) -> Result<()> {
    let mut mates: Vec<BTreeSet<AgentId>> = vec![BTreeSet::new(); config.n()];
    for clique in cliques {
        for &v in clique.iter() {
            mates[v].extend(clique.iter().copied().filter(|&u| u != v));
        }
    }
    for (v, set) in mates.into_iter().enumerate() {
        let targets: BTreeMap<AgentId, Rational> = set.into_iter().map(|u| (u, rate.clone())).collect();
        config.set_strategy(v, realize_nested(&targets, v)?);
    }
    Ok(())
}

/// Samples a regular uniform hypergraph, drops hyperedges on short cycles,
/// and turns each remaining hyperedge into a rate-`1/k` clique. Needs
/// `1/k < gamma < 1 - 1/k`.
pub fn build_hypergraph_network(params: &Parameters, spec: &HypergraphSpec) -> Result<HypergraphNetwork> {
    let gamma = params.gamma();
    let k = spec.k;
    if k < 3 {
        return Err(Error::Regime(format!("hyperedge size must be at least 3, got {k}")));
    }
    let rate = rational::ratio(1, k as i64);
    if gamma <= rate || gamma >= Rational::one() - &rate {
        return Err(Error::Regime(format!(
            "hypergraph network with k = {k} needs {} < gamma < {}, got {}",
            rational::format(&rate),
            rational::format(&(Rational::one() - &rate)),
            rational::format(&gamma)
        )));
    }
    if !(spec.d * spec.n).is_multiple_of(k) {
        return Err(Error::Regime(format!("d*n = {} is not divisible by k = {k}", spec.d * spec.n)));
    }
    let hyperedges = sample_regular_hypergraph(spec)?;
    let removed = short_cycle_hyperedges(spec.n, &hyperedges);
    let mut network = HypergraphNetwork {
        config: EventConfiguration::empty(params.with_n(spec.n)),
        hyperedges,
        removed,
    };
    let kept: Vec<Vec<AgentId>> = network.kept().into_iter().cloned().collect();
    let refs: Vec<&Vec<AgentId>> = kept.iter().collect();
    host_clique_union(&mut network.config, &refs, &rate)?;
    Ok(network)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_is_regular_and_simple() {
        for sampler in [HypergraphSampler::GirthAware, HypergraphSampler::Uniform] {
            let spec = HypergraphSpec { n: 60, k: 3, d: 2, seed: 5, sampler };
            let edges = sample_regular_hypergraph(&spec).unwrap();
            assert_eq!(edges.len(), 40);
            let mut degree = vec![0; 60];
            for e in &edges {
                let set: BTreeSet<_> = e.iter().collect();
                assert_eq!(set.len(), 3);
                for &v in e {
                    degree[v] += 1;
                }
            }
            assert!(degree.iter().all(|&x| x == 2));
        }
    }

    #[test]
    fn short_cycles_detected() {
        // Two hyperedges sharing two vertices.
        assert_eq!(short_cycle_hyperedges(5, &[vec![0, 1, 2], vec![1, 2, 3], vec![3, 4, 0]]), vec![0, 1, 2]);
        // A cycle through four hyperedges.
        let square = vec![vec![0, 1, 8], vec![1, 2, 9], vec![2, 3, 10], vec![3, 0, 11]];
        assert_eq!(short_cycle_hyperedges(12, &square), vec![0, 1, 2, 3]);
        // Five hyperedges in a cycle are fine; a pendant hyperedge too.
        let pentagon = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0], vec![0, 5]];
        assert!(short_cycle_hyperedges(6, &pentagon).is_empty());
    }

    #[test]
    fn divisibility_is_checked() {
        let spec = HypergraphSpec { n: 10, k: 4, d: 1, seed: 0, sampler: HypergraphSampler::Uniform };
        assert!(sample_regular_hypergraph(&spec).is_err());
    }
}
