//! Asynchronous best-response dynamics: agents replace their strategy with
//! a best response one at a time until a full pass changes nothing.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AgentId, Event, EventConfiguration, InfinitesimalUtility, Strategy};
use crate::rational::{self, Rational};
use crate::stability::Analysis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateOrder {
    #[default]
    RoundRobin,
    /// A fresh uniformly random permutation of the agents every round.
    UniformRandom,
}

/// An agent joining at the start of `round` and hosting `events` (invitee
/// sets and rates; the host is the new agent).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrival {
    pub round: usize,
    pub events: Vec<(BTreeSet<AgentId>, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicsPolicy {
    pub order: UpdateOrder,
    pub max_rounds: usize,
    pub seed: u64,
    pub arrivals: Vec<Arrival>,
}

impl DynamicsPolicy {
    pub fn new(order: UpdateOrder, max_rounds: usize, seed: u64) -> Self {
        Self { order, max_rounds, seed, arrivals: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceStatus {
    Converged,
    RoundLimit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UtilityValue {
    pub main: String,
    pub b_coeff: String,
}

impl From<&InfinitesimalUtility> for UtilityValue {
    fn from(u: &InfinitesimalUtility) -> Self {
        Self { main: rational::format(&u.main), b_coeff: rational::format(&u.b_coeff) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TraceRecord {
    Arrival {
        round: usize,
        agent: AgentId,
    },
    Update {
        round: usize,
        agent: AgentId,
        changed: bool,
        old_utility: UtilityValue,
        new_utility: UtilityValue,
        edges_added: Vec<(AgentId, AgentId)>,
        edges_removed: Vec<(AgentId, AgentId)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub status: TraceStatus,
    pub rounds: usize,
    pub changes: usize,
}

fn edge_diff(before: &[(AgentId, AgentId)], after: &[(AgentId, AgentId)]) -> (Vec<(AgentId, AgentId)>, Vec<(AgentId, AgentId)>) {
    let before: BTreeSet<_> = before.iter().copied().collect();
    let after: BTreeSet<_> = after.iter().copied().collect();
    (after.difference(&before).copied().collect(), before.difference(&after).copied().collect())
}

fn admit(config: &mut EventConfiguration, arrival: &Arrival) -> Result<AgentId> {
    let v = config.n();
    let params = config.params.with_n(v + 1);
    let mut strategies = std::mem::take(&mut config.strategies);
    strategies.push(Strategy::empty());
    *config = EventConfiguration { params, strategies };
    for (invitees, rate) in &arrival.events {
        let event = Event::new(v, invitees.iter().copied(), rate.clone())?;
        config.push_event(event)?;
    }
    Ok(v)
}

/// Runs the dynamics from `config`. A step replaces the acting agent's
/// strategy only when the best response is strictly better, so every
/// stable configuration is a fixed point with zero changes.
pub fn run_dynamics(config: &EventConfiguration, policy: &DynamicsPolicy) -> Result<(EventConfiguration, Trace)> {
    if policy.max_rounds == 0 {
        return Err(Error::InvalidInput("max_rounds must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut current = config.clone();
    let mut records = Vec::new();
    let mut changes = 0;
    let last_arrival = policy.arrivals.iter().map(|a| a.round).max().unwrap_or(0);
    let mut status = TraceStatus::RoundLimit;
    let mut rounds = 0;
    for round in 1..=policy.max_rounds {
        rounds = round;
        for arrival in policy.arrivals.iter().filter(|a| a.round == round) {
            let agent = admit(&mut current, arrival)?;
            records.push(TraceRecord::Arrival { round, agent });
        }
        let mut order: Vec<AgentId> = (0..current.n()).collect();
        if policy.order == UpdateOrder::UniformRandom {
            order.shuffle(&mut rng);
        }
        let mut changed_this_round = false;
        let mut snapshot = current.clone();
        let mut analysis = Analysis::new(&snapshot);
        for v in order {
            let old = analysis.utility(v);
            let best = analysis.best_response(v);
            let improves = best.utility.compare(&old, &current.params.b) == Ordering::Greater;
            if !improves {
                records.push(TraceRecord::Update {
                    round,
                    agent: v,
                    changed: false,
                    old_utility: (&old).into(),
                    new_utility: (&old).into(),
                    edges_added: Vec::new(),
                    edges_removed: Vec::new(),
                });
                continue;
            }
            let before = analysis.graph.graph.edges();
            current.set_strategy(v, best.strategy);
            snapshot = current.clone();
            analysis = Analysis::new(&snapshot);
            let (edges_added, edges_removed) = edge_diff(&before, &analysis.graph.graph.edges());
            records.push(TraceRecord::Update {
                round,
                agent: v,
                changed: true,
                old_utility: (&old).into(),
                new_utility: (&analysis.utility(v)).into(),
                edges_added,
                edges_removed,
            });
            changes += 1;
            changed_this_round = true;
        }
        if !changed_this_round && round >= last_arrival {
            status = TraceStatus::Converged;
            break;
        }
    }
    Ok((current, Trace { records, status, rounds, changes }))
}
