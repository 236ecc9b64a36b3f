//! Game primitives: parameters, events, strategies, configurations,
//! meeting rates, the induced connection graph, costs and utilities.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{self, Rational};

pub type AgentId = usize;

/// Fixed per-unit-rate event cost `b`, either a concrete rational or the
/// symbolic "arbitrarily small positive" value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FixedCost {
    Infinitesimal,
    Value(Rational),
}

impl FixedCost {
    pub fn is_infinitesimal(&self) -> bool {
        matches!(self, FixedCost::Infinitesimal)
    }

    /// True when `b` is infinitesimal or exactly zero.
    pub fn is_vanishing(&self) -> bool {
        match self {
            FixedCost::Infinitesimal => true,
            FixedCost::Value(b) => b.is_zero(),
        }
    }
}

impl fmt::Display for FixedCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedCost::Infinitesimal => write!(f, "eps"),
            FixedCost::Value(v) => write!(f, "{}", rational::format(v)),
        }
    }
}

/// Game constants. `a` is the benefit per connection, `b` the fixed cost per
/// unit of event rate, `c` the cost per invitee per unit rate, `n` the
/// community size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameters {
    pub a: Rational,
    pub b: FixedCost,
    pub c: Rational,
    pub n: usize,
}

impl Parameters {
    pub fn new(a: Rational, b: FixedCost, c: Rational, n: usize) -> Result<Self> {
        if !a.is_positive() || !c.is_positive() {
            return Err(Error::InvalidInput("a and c must be positive".into()));
        }
        if let FixedCost::Value(b) = &b {
            if b.is_negative() {
                return Err(Error::InvalidInput("b must be non-negative".into()));
            }
        }
        if n == 0 {
            return Err(Error::InvalidInput("community must have at least one agent".into()));
        }
        Ok(Self { a, b, c, n })
    }

    /// Parameters with `a/c = gamma` (a = numerator, c = denominator) and
    /// infinitesimal `b`.
    pub fn from_gamma(gamma: &Rational, n: usize) -> Result<Self> {
        Self::new(
            Rational::from_integer(gamma.numer().clone()),
            FixedCost::Infinitesimal,
            Rational::from_integer(gamma.denom().clone()),
            n,
        )
    }

    pub fn gamma(&self) -> Rational {
        &self.a / &self.c
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn with_b(&self, b: FixedCost) -> Self {
        Self { b, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    pub host: AgentId,
    pub invitees: BTreeSet<AgentId>,
    pub rate: Rational,
}

impl Event {
    pub fn new(host: AgentId, invitees: impl IntoIterator<Item = AgentId>, rate: Rational) -> Result<Self> {
        let invitees: BTreeSet<AgentId> = invitees.into_iter().collect();
        if invitees.contains(&host) {
            return Err(Error::InvalidInput(format!("agent {host} invites itself")));
        }
        if invitees.is_empty() {
            return Err(Error::InvalidInput(format!("event hosted by {host} has no invitees")));
        }
        if !rate.is_positive() {
            return Err(Error::InvalidInput(format!(
                "event hosted by {host} has non-positive rate {}",
                rational::format(&rate)
            )));
        }
        Ok(Self { host, invitees, rate })
    }

    pub fn attends(&self, agent: AgentId) -> bool {
        agent == self.host || self.invitees.contains(&agent)
    }

    /// Host followed by invitees in ascending order.
    pub fn attendees(&self) -> impl Iterator<Item = AgentId> + '_ {
        std::iter::once(self.host).chain(self.invitees.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Strategy {
    pub events: Vec<Event>,
}

impl Strategy {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn total_rate(&self) -> Rational {
        self.events.iter().map(|e| e.rate.clone()).sum()
    }

    /// Rate at which the host meets each invitee through its own events.
    pub fn invitation_rates(&self) -> BTreeMap<AgentId, Rational> {
        let mut rates: BTreeMap<AgentId, Rational> = BTreeMap::new();
        for event in &self.events {
            for &u in &event.invitees {
                *rates.entry(u).or_insert_with(Rational::zero) += &event.rate;
            }
        }
        rates
    }
}

/// A full strategy profile: `strategies[v]` lists the events hosted by `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventConfiguration {
    pub params: Parameters,
    pub strategies: Vec<Strategy>,
}

impl EventConfiguration {
    pub fn empty(params: Parameters) -> Self {
        let n = params.n;
        Self { params, strategies: vec![Strategy::empty(); n] }
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    /// Builds a configuration from a flat event list, validating ids and
    /// event invariants.
    pub fn from_events(params: Parameters, events: impl IntoIterator<Item = Event>) -> Result<Self> {
        let mut config = Self::empty(params);
        for event in events {
            config.push_event(event)?;
        }
        Ok(config)
    }

    pub fn push_event(&mut self, event: Event) -> Result<()> {
        let n = self.n();
        if event.host >= n {
            return Err(Error::InvalidInput(format!("host {} out of range (n = {n})", event.host)));
        }
        if let Some(&bad) = event.invitees.iter().find(|&&u| u >= n) {
            return Err(Error::InvalidInput(format!("invitee {bad} out of range (n = {n})")));
        }
        if event.invitees.contains(&event.host) || event.invitees.is_empty() || !event.rate.is_positive() {
            return Err(Error::InvalidInput(format!("malformed event hosted by {}", event.host)));
        }
        self.strategies[event.host].events.push(event);
        Ok(())
    }

    /// Convenience for `host` inviting `invitees` at `rate`.
    pub fn host(&mut self, host: AgentId, invitees: impl IntoIterator<Item = AgentId>, rate: Rational) -> Result<()> {
        let event = Event::new(host, invitees, rate)?;
        self.push_event(event)
    }

    pub fn set_strategy(&mut self, v: AgentId, strategy: Strategy) {
        self.strategies[v] = strategy;
    }

    pub fn events(&self) -> impl Iterator<Item = &Event> {
        self.strategies.iter().flat_map(|s| s.events.iter())
    }

    pub fn with_params(&self, params: Parameters) -> Self {
        Self { params, strategies: self.strategies.clone() }
    }

    /// For each agent, the events it attends (as host or invitee), given as
    /// `(host, event index)` pairs.
    pub fn attendance(&self) -> Vec<Vec<(AgentId, usize)>> {
        let mut index = vec![Vec::new(); self.n()];
        for (host, strategy) in self.strategies.iter().enumerate() {
            for (i, event) in strategy.events.iter().enumerate() {
                for agent in event.attendees() {
                    index[agent].push((host, i));
                }
            }
        }
        index
    }

    pub fn event(&self, host: AgentId, index: usize) -> &Event {
        &self.strategies[host].events[index]
    }
}

/// Rate at which `u` and `v` meet at events hosted by `w`. The host attends
/// its own events.
pub fn meeting_rate_by(config: &EventConfiguration, w: AgentId, u: AgentId, v: AgentId) -> Result<Rational> {
    if u == v {
        return Err(Error::InvalidPair(u));
    }
    Ok(config.strategies[w]
        .events
        .iter()
        .filter(|e| e.attends(u) && e.attends(v))
        .map(|e| e.rate.clone())
        .sum())
}

/// Total meeting rate of `u` and `v` over all hosts.
pub fn meeting_rate(config: &EventConfiguration, u: AgentId, v: AgentId) -> Result<Rational> {
    if u == v {
        return Err(Error::InvalidPair(u));
    }
    Ok(config
        .events()
        .filter(|e| e.attends(u) && e.attends(v))
        .map(|e| e.rate.clone())
        .sum())
}

/// The induced social network: all co-attending pairs with their meeting
/// rates, and an edge wherever the rate reaches 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionGraph {
    pub n: usize,
    pub meeting_rates: BTreeMap<(AgentId, AgentId), Rational>,
    pub graph: Graph,
}

impl ConnectionGraph {
    pub fn meeting_rate(&self, u: AgentId, v: AgentId) -> Rational {
        let key = if u < v { (u, v) } else { (v, u) };
        self.meeting_rates.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn neighbors(&self, v: AgentId) -> &BTreeSet<AgentId> {
        self.graph.neighbors(v)
    }

    pub fn degree(&self, v: AgentId) -> usize {
        self.graph.degree(v)
    }
}

pub fn connection_graph(config: &EventConfiguration) -> ConnectionGraph {
    let n = config.n();
    let mut meeting_rates: BTreeMap<(AgentId, AgentId), Rational> = BTreeMap::new();
    for event in config.events() {
        let attendees: Vec<AgentId> = {
            let mut all: Vec<AgentId> = event.attendees().collect();
            all.sort_unstable();
            all
        };
        for (i, &u) in attendees.iter().enumerate() {
            for &v in &attendees[i + 1..] {
                *meeting_rates.entry((u, v)).or_insert_with(Rational::zero) += &event.rate;
            }
        }
    }
    let one = Rational::one();
    let mut graph = Graph::new(n);
    for (&(u, v), rate) in &meeting_rates {
        if *rate >= one {
            graph.add_edge(u, v);
        }
    }
    ConnectionGraph { n, meeting_rates, graph }
}

/// A utility or cost value in which `b` is kept symbolic: the value is
/// `main + b * b_coeff`. With infinitesimal `b`, comparison is
/// lexicographic (main first, then `b_coeff`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InfinitesimalUtility {
    pub main: Rational,
    pub b_coeff: Rational,
}

impl InfinitesimalUtility {
    pub fn new(main: Rational, b_coeff: Rational) -> Self {
        Self { main, b_coeff }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    /// Concrete value when `b` is a number; `None` for infinitesimal `b`.
    pub fn collapse(&self, b: &FixedCost) -> Option<Rational> {
        match b {
            FixedCost::Infinitesimal => None,
            FixedCost::Value(b) => Some(&self.main + b * &self.b_coeff),
        }
    }

    pub fn compare(&self, other: &Self, b: &FixedCost) -> Ordering {
        match b {
            FixedCost::Infinitesimal => self
                .main
                .cmp(&other.main)
                .then_with(|| self.b_coeff.cmp(&other.b_coeff)),
            FixedCost::Value(b) => {
                let lhs = &self.main + b * &self.b_coeff;
                let rhs = &other.main + b * &other.b_coeff;
                lhs.cmp(&rhs)
            }
        }
    }

    pub fn negate(&self) -> Self {
        Self::new(-&self.main, -&self.b_coeff)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.main - &other.main, &self.b_coeff - &other.b_coeff)
    }

    pub fn render(&self) -> String {
        format!("{} + b*({})", rational::format(&self.main), rational::format(&self.b_coeff))
    }
}

/// Cost of a strategy: `sum_i r_i (c |invitees_i| + b)`, returned as the
/// positive pair `(c * sum r_i |invitees_i|, sum r_i)`.
pub fn cost(params: &Parameters, strategy: &Strategy) -> InfinitesimalUtility {
    let mut main = Rational::zero();
    let mut b_coeff = Rational::zero();
    for event in &strategy.events {
        main += &event.rate * rational::from_usize(event.invitees.len());
        b_coeff += &event.rate;
    }
    InfinitesimalUtility::new(&params.c * main, b_coeff)
}

/// Utility of `v`: `a |N_v|` minus the cost of its own strategy.
pub fn utility(config: &EventConfiguration, v: AgentId) -> InfinitesimalUtility {
    let graph = connection_graph(config);
    utility_with_graph(config, &graph, v)
}

pub fn utility_with_graph(config: &EventConfiguration, graph: &ConnectionGraph, v: AgentId) -> InfinitesimalUtility {
    let benefit = &config.params.a * rational::from_usize(graph.degree(v));
    let spent = cost(&config.params, &config.strategies[v]);
    InfinitesimalUtility::new(benefit - spent.main, -spent.b_coeff)
}
