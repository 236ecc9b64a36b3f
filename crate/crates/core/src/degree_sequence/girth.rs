//! Random connected `k`-regular graphs of girth at least 5.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::girth;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularGirthGraph {
    pub k: usize,
    pub graph: Graph,
}

impl RegularGirthGraph {
    pub fn m(&self) -> usize {
        self.graph.n()
    }
}

/// Smallest order the generator is asked to handle for degree `k`: twice
/// the Moore bound `k^2 + 1`, rounded to `2k^2`.
pub fn min_girth5_order(k: usize) -> usize {
    (2 * k * k).max(5)
}

fn restarts_for(m: usize) -> usize {
    if m <= 30 {
        5000
    } else if m <= 200 {
        400
    } else {
        40
    }
}

/// Connected `k`-regular simple graph on `m` vertices with no cycle of
/// length 3 or 4. Greedy random edge insertion keeping every new edge's
/// endpoints at distance at least 4, followed by edge-swap repair of
/// stuck vertices; restarts a bounded number of times.
pub fn gen_regular_girth5(k: usize, m: usize, seed: u64) -> Result<RegularGirthGraph> {
    if k == 0 || !(k * m).is_multiple_of(2) {
        return Err(Error::Infeasible(format!("no {k}-regular graph on {m} vertices (k*m must be even, k >= 1)")));
    }
    if m < k * k + 1 && k >= 2 {
        return Err(Error::Infeasible(format!(
            "a {k}-regular graph of girth 5 needs at least {} vertices, got {m}",
            k * k + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if k == 1 {
        return Err(Error::Infeasible("a 1-regular graph on more than 2 vertices is disconnected".into()));
    }
    if k == 2 {
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(&mut rng);
        let graph = Graph::from_edges(m, (0..m).map(|i| (order[i], order[(i + 1) % m])));
        return Ok(RegularGirthGraph { k, graph });
    }
    let restarts = restarts_for(m);
    let mut repairs = 0usize;
    for _ in 0..restarts {
        if let Some(graph) = attempt(k, m, &mut rng, &mut repairs) {
            if graph.is_connected() && girth(&graph).is_none_or(|g| g >= 5) {
                return Ok(RegularGirthGraph { k, graph });
            }
        }
    }
    Err(Error::Infeasible(format!(
        "no connected {k}-regular girth-5 graph on {m} vertices after {restarts} restarts ({repairs} swap repairs)"
    )))
}

/// True when `a` and `b` are at distance at least 4 (so edge `ab` closes no
/// cycle shorter than 5).
fn far(g: &Graph, a: usize, b: usize) -> bool {
    if a == b {
        return false;
    }
    let mut dist = std::collections::HashMap::from([(a, 0usize)]);
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == 3 {
            continue;
        }
        for &w in g.neighbors(u) {
            if w == b {
                return false;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(du + 1);
                queue.push_back(w);
            }
        }
    }
    true
}

fn attempt(k: usize, m: usize, rng: &mut ChaCha8Rng, repairs: &mut usize) -> Option<Graph> {
    let mut g = Graph::new(m);
    let mut open: Vec<usize> = (0..m).collect();
    const TRIES: usize = 50;
    loop {
        open.retain(|&v| g.degree(v) < k);
        if open.is_empty() {
            return Some(g);
        }
        let u = open[rng.gen_range(0..open.len())];
        let mut placed = false;
        for _ in 0..TRIES {
            let v = open[rng.gen_range(0..open.len())];
            if v != u && !g.has_edge(u, v) && far(&g, u, v) {
                g.add_edge(u, v);
                placed = true;
                break;
            }
        }
        if !placed {
            let partners: Vec<usize> = open
                .iter()
                .copied()
                .filter(|&v| v != u && !g.has_edge(u, v) && far(&g, u, v))
                .collect();
            if let Some(&v) = partners.choose(rng) {
                g.add_edge(u, v);
                continue;
            }
            if !repair(&mut g, u, &open, k, rng) {
                return None;
            }
            *repairs += 1;
        }
    }
}

/// Frees capacity for `u` by replacing an edge `xy` with `ux` and `wy`,
/// where `w` is another open vertex or `u` itself.
fn repair(g: &mut Graph, u: usize, open: &[usize], k: usize, rng: &mut ChaCha8Rng) -> bool {
    let mut edges = g.edges();
    edges.shuffle(rng);
    let needs_two = k - g.degree(u) >= 2;
    let mut partners: Vec<usize> = open.iter().copied().filter(|&w| w != u).collect();
    partners.shuffle(rng);
    if needs_two {
        partners.insert(0, u);
    }
    for &(x0, y0) in edges.iter().take(4000) {
        for (x, y) in [(x0, y0), (y0, x0)] {
            if x == u || y == u {
                continue;
            }
            for &w in partners.iter().take(8) {
                if w == x || w == y || g.has_edge(u, x) || g.has_edge(w, y) {
                    continue;
                }
                if w != u && g.degree(w) >= k {
                    continue;
                }
                g.remove_edge(x, y);
                if far(g, u, x) {
                    g.add_edge(u, x);
                    if w != y && far(g, w, y) {
                        g.add_edge(w, y);
                        return true;
                    }
                    g.remove_edge(u, x);
                }
                g.add_edge(x, y);
            }
        }
    }
    false
}
