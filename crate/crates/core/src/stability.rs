//! Deficits, best responses, nested realizations and the two stability
//! verdicts (structural criterion and exhaustive unilateral deviation).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    connection_graph, utility_with_graph, AgentId, ConnectionGraph, Event, EventConfiguration, FixedCost,
    InfinitesimalUtility, Parameters, Strategy,
};
use crate::rational::{self, Rational};

/// Deficits of one agent, stored sparsely: agents absent from `explicit`
/// share no foreign event with `v` and have deficit exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficitProfile {
    pub v: AgentId,
    pub n: usize,
    pub explicit: BTreeMap<AgentId, Rational>,
}

impl DeficitProfile {
    pub fn get(&self, u: AgentId) -> Rational {
        self.explicit.get(&u).cloned().unwrap_or_else(Rational::one)
    }

    /// Dense map over every `u != v`.
    pub fn to_map(&self) -> BTreeMap<AgentId, Rational> {
        (0..self.n).filter(|&u| u != self.v).map(|u| (u, self.get(u))).collect()
    }

    /// Agents with `0 < E < gamma`, sorted by `(E, id)`.
    pub fn candidates(&self, gamma: &Rational) -> Vec<(Rational, AgentId)> {
        let mut out: Vec<(Rational, AgentId)> = self
            .explicit
            .iter()
            .filter(|(_, e)| e.is_positive() && *e < gamma)
            .map(|(&u, e)| (e.clone(), u))
            .collect();
        if Rational::one() < *gamma {
            out.extend(
                (0..self.n)
                    .filter(|&u| u != self.v && !self.explicit.contains_key(&u))
                    .map(|u| (Rational::one(), u)),
            );
        }
        out.sort();
        out
    }

    /// Agents reached for free (`E <= 0`).
    pub fn free(&self) -> BTreeSet<AgentId> {
        self.explicit
            .iter()
            .filter(|(_, e)| !e.is_positive())
            .map(|(&u, _)| u)
            .collect()
    }
}

/// `T_v` (agents worth supporting), `I_v` (agents `v` currently invites) and
/// the agents `v` meets at rate at least 1 without hosting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseSets {
    pub targets: BTreeSet<AgentId>,
    pub invitees: BTreeSet<AgentId>,
    pub free: BTreeSet<AgentId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestResponse {
    pub target_rates: BTreeMap<AgentId, Rational>,
    pub strategy: Strategy,
    pub utility: InfinitesimalUtility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    Subset,
    RateMatch,
    Ordering,
    ProfitableDeviation,
}

impl Condition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::Subset => "subset",
            Condition::RateMatch => "rate-match",
            Condition::Ordering => "ordering",
            Condition::ProfitableDeviation => "profitable-deviation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Violation {
    pub agent: AgentId,
    pub condition: Condition,
    pub witness: (AgentId, AgentId),
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityReport {
    pub stable: bool,
    pub violations: Vec<Violation>,
}

impl StabilityReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self { stable: violations.is_empty(), violations }
    }

    pub fn conditions(&self) -> BTreeSet<Condition> {
        self.violations.iter().map(|v| v.condition).collect()
    }

    pub fn agents(&self) -> BTreeSet<AgentId> {
        self.violations.iter().map(|v| v.agent).collect()
    }
}

/// Read-only data shared by all per-agent computations on one configuration.
pub struct Analysis<'a> {
    pub config: &'a EventConfiguration,
    pub graph: ConnectionGraph,
    attendance: Vec<Vec<(AgentId, usize)>>,
}

impl<'a> Analysis<'a> {
    pub fn new(config: &'a EventConfiguration) -> Self {
        Self { config, graph: connection_graph(config), attendance: config.attendance() }
    }

    pub fn deficits(&self, v: AgentId) -> DeficitProfile {
        let mut foreign: BTreeMap<AgentId, Rational> = BTreeMap::new();
        for &(host, index) in &self.attendance[v] {
            if host == v {
                continue;
            }
            let event = self.config.event(host, index);
            for u in event.attendees().filter(|&u| u != v) {
                *foreign.entry(u).or_insert_with(Rational::zero) += &event.rate;
            }
        }
        let explicit = foreign.into_iter().map(|(u, m)| (u, Rational::one() - m)).collect();
        DeficitProfile { v, n: self.config.n(), explicit }
    }

    pub fn response_sets(&self, v: AgentId) -> ResponseSets {
        let profile = self.deficits(v);
        let gamma = self.config.params.gamma();
        ResponseSets {
            targets: profile.candidates(&gamma).into_iter().map(|(_, u)| u).collect(),
            invitees: self.config.strategies[v]
                .invitation_rates()
                .into_iter()
                .filter(|(_, r)| r.is_positive())
                .map(|(u, _)| u)
                .collect(),
            free: profile.free(),
        }
    }

    pub fn best_response(&self, v: AgentId) -> BestResponse {
        best_response_from_profile(&self.config.params, &self.deficits(v))
    }

    pub fn utility(&self, v: AgentId) -> InfinitesimalUtility {
        utility_with_graph(self.config, &self.graph, v)
    }

    fn criterion_violations(&self, v: AgentId) -> Vec<Violation> {
        let gamma = self.config.params.gamma();
        let profile = self.deficits(v);
        let own = self.config.strategies[v].invitation_rates();
        let invited: BTreeMap<AgentId, Rational> = own.into_iter().filter(|(_, r)| r.is_positive()).collect();
        let candidates = profile.candidates(&gamma);
        let targets: BTreeSet<AgentId> = candidates.iter().map(|&(_, u)| u).collect();
        let mut out = Vec::new();
        for (&u, rate) in &invited {
            let e = profile.get(u);
            if !targets.contains(&u) {
                out.push(Violation {
                    agent: v,
                    condition: Condition::Subset,
                    witness: (v, u),
                    detail: format!(
                        "agent {v} invites {u} whose deficit {} lies outside (0, {})",
                        rational::format(&e),
                        rational::format(&gamma)
                    ),
                });
            }
            if *rate != e {
                out.push(Violation {
                    agent: v,
                    condition: Condition::RateMatch,
                    witness: (v, u),
                    detail: format!(
                        "agent {v} meets {u} at own rate {} but the deficit is {}",
                        rational::format(rate),
                        rational::format(&e)
                    ),
                });
            }
        }
        // Cheapest uninvited target; every invited agent must be strictly cheaper.
        if let Some((e_w, w)) = candidates.iter().find(|(_, u)| !invited.contains_key(u)) {
            for &u in invited.keys() {
                let e_u = profile.get(u);
                if targets.contains(&u) && e_u >= *e_w {
                    out.push(Violation {
                        agent: v,
                        condition: Condition::Ordering,
                        witness: (u, *w),
                        detail: format!(
                            "agent {v} invites {u} (deficit {}) but not {w} (deficit {})",
                            rational::format(&e_u),
                            rational::format(e_w)
                        ),
                    });
                }
            }
        }
        out
    }

    fn deviation_violation(&self, v: AgentId) -> Option<Violation> {
        let params = &self.config.params;
        let current = self.utility(v);
        let best = self.best_response(v);
        if best.utility.compare(&current, &params.b) != Ordering::Greater {
            return None;
        }
        let own = self.config.strategies[v].invitation_rates();
        let touched: BTreeSet<AgentId> = own.keys().chain(best.target_rates.keys()).copied().collect();
        let differing = touched.into_iter().find(|u| {
            let now = own.get(u).cloned().unwrap_or_else(Rational::zero);
            let then = best.target_rates.get(u).cloned().unwrap_or_else(Rational::zero);
            now != then
        });
        let (witness, what) = match differing {
            Some(u) => ((v, u), format!("changes its rate towards {u}")),
            None => ((v, v), "uses a non-minimal realization".to_string()),
        };
        Some(Violation {
            agent: v,
            condition: Condition::ProfitableDeviation,
            witness,
            detail: format!(
                "agent {v} {what}: utility {} can rise to {}",
                current.render(),
                best.utility.render()
            ),
        })
    }
}

/// `E_{v,u}` for every `u != v`, from events not hosted by `v`.
pub fn deficits(config: &EventConfiguration, v: AgentId) -> BTreeMap<AgentId, Rational> {
    Analysis::new(config).deficits(v).to_map()
}

pub fn response_sets(config: &EventConfiguration, v: AgentId) -> ResponseSets {
    Analysis::new(config).response_sets(v)
}

/// Cost-minimal strategy for `v` meeting each `u` at exactly `targets[u]`:
/// nested events over agents sorted by decreasing target (ties by id).
pub fn realize_nested(targets: &BTreeMap<AgentId, Rational>, v: AgentId) -> Result<Strategy> {
    if let Some((u, r)) = targets.iter().find(|(_, r)| r.is_negative()) {
        return Err(Error::InvalidInput(format!(
            "negative target rate {} for agent {u}",
            rational::format(r)
        )));
    }
    if targets.get(&v).is_some_and(|r| r.is_positive()) {
        return Err(Error::InvalidInput(format!("agent {v} cannot target itself")));
    }
    let mut order: Vec<(AgentId, &Rational)> = targets
        .iter()
        .filter(|(&u, r)| u != v && r.is_positive())
        .map(|(&u, r)| (u, r))
        .collect();
    order.sort_by(|(u1, r1), (u2, r2)| r2.cmp(r1).then(u1.cmp(u2)));
    let mut events = Vec::new();
    for i in 0..order.len() {
        let next = order.get(i + 1).map(|(_, r)| (*r).clone()).unwrap_or_else(Rational::zero);
        let rate = order[i].1 - next;
        if rate.is_positive() {
            events.push(Event::new(v, order[..=i].iter().map(|(u, _)| *u), rate)?);
        }
    }
    Ok(Strategy { events })
}

/// Minimal cost of meeting each agent at its target rate: `c * sum + b * max`.
pub fn realization_cost(params: &Parameters, targets: &BTreeMap<AgentId, Rational>) -> InfinitesimalUtility {
    let total: Rational = targets.values().cloned().sum();
    InfinitesimalUtility::new(&params.c * total, rational::max_of(targets.values()))
}

/// Best response given a deficit profile: support the cheapest `j`
/// candidates for the `j` with the highest utility (smallest on ties).
pub fn best_response_from_profile(params: &Parameters, profile: &DeficitProfile) -> BestResponse {
    let gamma = params.gamma();
    let candidates = profile.candidates(&gamma);
    let free = rational::from_usize(profile.free().len());
    let base = &params.a * &free;
    let mut best = InfinitesimalUtility::new(base.clone(), Rational::zero());
    let mut best_j = 0;
    let mut spent = Rational::zero();
    for (j, (e, _)) in candidates.iter().enumerate() {
        spent += e;
        let value = InfinitesimalUtility::new(
            &base + &params.a * rational::from_usize(j + 1) - &params.c * &spent,
            -e.clone(),
        );
        if value.compare(&best, &params.b) == Ordering::Greater {
            best = value;
            best_j = j + 1;
        }
    }
    let target_rates: BTreeMap<AgentId, Rational> =
        candidates[..best_j].iter().map(|(e, u)| (*u, e.clone())).collect();
    let strategy = realize_nested(&target_rates, profile.v).expect("deficits in (0, 1] are valid targets");
    BestResponse { target_rates, strategy, utility: best }
}

pub fn best_response(config: &EventConfiguration, v: AgentId) -> BestResponse {
    Analysis::new(config).best_response(v)
}

/// Structural criterion: every invited agent is a target, is met at exactly
/// its deficit, and is strictly cheaper than every uninvited target. Only
/// defined when `b` is infinitesimal or zero.
pub fn check_stability_criterion(config: &EventConfiguration) -> Result<StabilityReport> {
    if !config.params.b.is_vanishing() {
        return Err(Error::UnsupportedRegime(format!(
            "criterion needs b = eps or 0, got b = {}; use the deviation check",
            config.params.b
        )));
    }
    let analysis = Analysis::new(config);
    let per_agent: Vec<Vec<Violation>> =
        (0..config.n()).into_par_iter().map(|v| analysis.criterion_violations(v)).collect();
    Ok(StabilityReport::from_violations(per_agent.into_iter().flatten().collect()))
}

/// Nash stability: no agent gains by replacing its strategy with a best
/// response. Valid for any `b`.
pub fn check_stability_deviation(config: &EventConfiguration) -> StabilityReport {
    let analysis = Analysis::new(config);
    let per_agent: Vec<Option<Violation>> =
        (0..config.n()).into_par_iter().map(|v| analysis.deviation_violation(v)).collect();
    StabilityReport::from_violations(per_agent.into_iter().flatten().collect())
}

pub fn is_stable(config: &EventConfiguration) -> bool {
    check_stability_deviation(config).stable
}

/// Checks the vanishing-`b` criterion with `b` replaced by its
/// infinitesimal counterpart; used where callers carry a concrete `b`.
pub fn check_criterion_infinitesimal(config: &EventConfiguration) -> StabilityReport {
    let config = config.with_params(config.params.with_b(FixedCost::Infinitesimal));
    check_stability_criterion(&config).expect("infinitesimal b is supported")
}
