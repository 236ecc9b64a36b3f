//! Simple undirected graphs on `0..n` with sorted adjacency.

use std::collections::{BTreeSet, VecDeque};

use crate::model::AgentId;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adjacency: Vec<BTreeSet<AgentId>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self { adjacency: vec![BTreeSet::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (AgentId, AgentId)>) -> Self {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Adds `{u, v}`; self-loops are ignored. Returns whether the edge is new.
    pub fn add_edge(&mut self, u: AgentId, v: AgentId) -> bool {
        if u == v {
            return false;
        }
        let fresh = self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        fresh
    }

    pub fn remove_edge(&mut self, u: AgentId, v: AgentId) -> bool {
        let had = self.adjacency[u].remove(&v);
        self.adjacency[v].remove(&u);
        had
    }

    pub fn has_edge(&self, u: AgentId, v: AgentId) -> bool {
        self.adjacency[u].contains(&v)
    }

    pub fn neighbors(&self, v: AgentId) -> &BTreeSet<AgentId> {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: AgentId) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(BTreeSet::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(AgentId, AgentId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs.range(u + 1..) {
                out.push((u, v));
            }
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<AgentId>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Subgraph induced on `vertices`, relabelled to `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[AgentId]) -> Graph {
        let position: std::collections::HashMap<AgentId, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for w in &self.adjacency[v] {
                if let Some(&j) = position.get(w) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// BFS distances from `source`, `usize::MAX` when unreachable.
    pub fn distances_from(&self, source: AgentId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}
