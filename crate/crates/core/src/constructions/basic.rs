//! Small explicit stable configurations: complete graph with one host,
//! cliques, two cliques sharing vertices, and the two-triangle graph.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::model::{AgentId, EventConfiguration, FixedCost, Parameters};
use crate::rational::{self, Rational};
use crate::stability::{check_stability_deviation, realize_nested};

fn gamma_text(params: &Parameters) -> String {
    rational::format(&params.gamma())
}

/// Agent 0 hosts everyone at rate 1. Requires `gamma > 1` and
/// `b < c (gamma - 1)`.
pub fn build_complete_single_host(params: &Parameters, n: usize) -> Result<EventConfiguration> {
    let params = params.with_n(n);
    let gamma = params.gamma();
    if gamma <= Rational::one() {
        return Err(Error::Regime(format!("single host needs gamma > 1, got {}", gamma_text(&params))));
    }
    if let FixedCost::Value(b) = &params.b {
        let limit = &params.c * (&gamma - Rational::one());
        if *b >= limit {
            return Err(Error::Regime(format!(
                "single host needs b < c(gamma - 1) = {}, got {}",
                rational::format(&limit),
                rational::format(b)
            )));
        }
    }
    if n < 2 {
        return Err(Error::Regime("single host needs n >= 2".into()));
    }
    let mut config = EventConfiguration::empty(params);
    config.host(0, 1..n, Rational::one())?;
    Ok(config)
}

/// Every member of `members` hosts all other members at `rate`.
pub fn add_clique(config: &mut EventConfiguration, members: &[AgentId], rate: &Rational) -> Result<()> {
    for &v in members {
        config.host(v, members.iter().copied().filter(|&u| u != v), rate.clone())?;
    }
    Ok(())
}

/// Rate-`1/l` clique on `l` agents without any regime check.
pub fn clique_configuration(params: &Parameters, l: usize) -> Result<EventConfiguration> {
    if l < 2 {
        return Err(Error::InvalidInput("a clique needs at least 2 agents".into()));
    }
    let mut config = EventConfiguration::empty(params.with_n(l));
    let members: Vec<AgentId> = (0..l).collect();
    add_clique(&mut config, &members, &rational::ratio(1, l as i64))?;
    Ok(config)
}

/// Rate-`1/l` clique; stable exactly when `gamma > 1/l`.
pub fn build_clique(params: &Parameters, l: usize) -> Result<EventConfiguration> {
    if l < 2 {
        return Err(Error::Regime("a clique needs at least 2 agents".into()));
    }
    let limit = rational::ratio(1, l as i64);
    if params.gamma() <= limit {
        return Err(Error::Regime(format!(
            "clique of size {l} needs gamma > {}, got {}",
            rational::format(&limit),
            gamma_text(params)
        )));
    }
    clique_configuration(params, l)
}

/// Vertex layout of two `k`-cliques sharing `p` vertices: shared vertices
/// `0..p`, then the private part of each side.
pub fn hkp_sides(k: usize, p: usize) -> (Vec<AgentId>, Vec<AgentId>, Vec<AgentId>) {
    let shared: Vec<AgentId> = (0..p).collect();
    let side_a: Vec<AgentId> = (p..k).collect();
    let side_b: Vec<AgentId> = (k..2 * k - p).collect();
    (shared, side_a, side_b)
}

/// Two `k`-cliques sharing `p` vertices.
///
/// With `p = 1`: if `gamma < 1 - 1/k` every vertex hosts its neighbourhood
/// at rate `1/k`; otherwise the shared vertex hosts nothing and the others
/// host their clique at rate `1/(k-1)`. With `p > 1` the shared vertices
/// host nothing and each private vertex hosts its whole clique at rate
/// `1/(k-p)`. Agents of different sides never meet, so `gamma <= 1` is
/// required as well.
pub fn build_hkp(params: &Parameters, k: usize, p: usize) -> Result<EventConfiguration> {
    let gamma = params.gamma();
    if p == 0 {
        return Err(Error::Regime("shared part must be non-empty".into()));
    }
    if p == 1 && k <= 2 {
        return Err(Error::Regime(format!("k must exceed 2 when p = 1, got k = {k}")));
    }
    if p > 1 && k <= p + 1 {
        return Err(Error::Regime(format!("k must exceed p + 1, got k = {k}, p = {p}")));
    }
    let private = k - p;
    let floor = if p == 1 { rational::ratio(1, k as i64) } else { rational::ratio(1, private as i64) };
    if gamma <= floor {
        return Err(Error::Regime(format!(
            "two {k}-cliques sharing {p} vertices need gamma > {}, got {}",
            rational::format(&floor),
            gamma_text(params)
        )));
    }
    if gamma > Rational::one() {
        return Err(Error::Regime(format!(
            "two {k}-cliques sharing {p} vertices need gamma <= 1, got {}",
            gamma_text(params)
        )));
    }
    let (shared, side_a, side_b) = hkp_sides(k, p);
    let mut config = EventConfiguration::empty(params.with_n(2 * k - p));
    let threshold = Rational::one() - rational::ratio(1, k as i64);
    if p == 1 && gamma < threshold {
        let rate = rational::ratio(1, k as i64);
        let everyone: Vec<AgentId> = side_a.iter().chain(&side_b).copied().collect();
        config.host(shared[0], everyone, rate.clone())?;
        for side in [&side_a, &side_b] {
            for &v in side.iter() {
                let invitees = shared.iter().chain(side.iter()).copied().filter(|&u| u != v);
                config.host(v, invitees, rate.clone())?;
            }
        }
    } else {
        let rate = rational::ratio(1, private as i64);
        for side in [&side_a, &side_b] {
            for &v in side.iter() {
                let invitees = shared.iter().chain(side.iter()).copied().filter(|&u| u != v);
                config.host(v, invitees, rate.clone())?;
            }
        }
    }
    Ok(config)
}

/// Vertex roles in the two-triangle graph: `x`, `w` adjacent to everyone,
/// `u`, `v` not adjacent to each other.
pub const H32_X: AgentId = 0;
pub const H32_W: AgentId = 1;
pub const H32_U: AgentId = 2;
pub const H32_V: AgentId = 3;

/// Own-rate targets of each agent in the stable two-triangle configuration,
/// as functions of gamma. Produced by `examples/derive_h32.rs`.
pub fn h32_targets(gamma: &Rational) -> Vec<BTreeMap<AgentId, Rational>> {
    let one = Rational::one();
    let half = rational::ratio(1, 2);
    let six = rational::int(6);
    let four = rational::int(4);
    let two = rational::int(2);
    let low = (&one - gamma) * &half; // (1 - g)/2
    let mid = (&two - gamma) / &six; // (2 - g)/6
    let high = (&one + &four * gamma) / &six; // (1 + 4g)/6
    let mut targets = vec![BTreeMap::new(); 4];
    targets[H32_W] = BTreeMap::from([(H32_U, low.clone()), (H32_X, mid.clone()), (H32_V, half.clone())]);
    targets[H32_X] = BTreeMap::from([(H32_U, high.clone()), (H32_W, mid.clone()), (H32_V, low)]);
    targets[H32_U] = BTreeMap::from([(H32_W, high.clone()), (H32_X, mid)]);
    targets[H32_V] = BTreeMap::from([(H32_W, gamma * &half), (H32_X, high)]);
    targets
}

/// Unchecked two-triangle configuration at the parameters' gamma.
pub fn h32_configuration(params: &Parameters) -> Result<EventConfiguration> {
    let gamma = params.gamma();
    let mut config = EventConfiguration::empty(params.with_n(4));
    for (agent, targets) in h32_targets(&gamma).iter().enumerate() {
        config.set_strategy(agent, realize_nested(targets, agent)?);
    }
    Ok(config)
}

/// Two triangles sharing an edge; needs `1/2 < gamma <= 1`.
pub fn build_h32(params: &Parameters) -> Result<EventConfiguration> {
    let gamma = params.gamma();
    if gamma <= rational::ratio(1, 2) || gamma > Rational::one() {
        return Err(Error::Regime(format!(
            "two triangles sharing an edge need 1/2 < gamma <= 1, got {}",
            gamma_text(params)
        )));
    }
    let config = h32_configuration(params)?;
    let report = check_stability_deviation(&config);
    if !report.stable {
        return Err(Error::Invariant(format!(
            "two-triangle configuration unstable at gamma = {}: {:?}",
            gamma_text(params),
            report.violations
        )));
    }
    Ok(config)
}
