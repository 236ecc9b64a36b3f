//! Dense networks in which every agent invites at most `K` others.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::One;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{AgentId, EventConfiguration, Parameters};
use crate::rational::{self, Rational};
use crate::stability::realize_nested;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseNetwork {
    pub config: EventConfiguration,
    /// Group size `floor(1/gamma) + 1`.
    pub group_size: usize,
    /// Hosting groups.
    pub groups: Vec<Vec<AgentId>>,
    /// Non-hosting guests added to each group.
    pub guests: Vec<Vec<AgentId>>,
}

/// Splits agents into consecutive hosting groups of size
/// `k* = floor(1/gamma) + 1`, draws a random guest list for each group, and
/// keeps a guest only if it shares no pair with another group. Every host
/// invites its group and the kept guests at rate `1/k*`, so each pair meets
/// at rate 0 or 1 and each host invites at most `K` agents.
pub fn build_dense_k_supportable(params: &Parameters, n: usize, k_max: usize, seed: u64) -> Result<DenseNetwork> {
    let gamma = params.gamma();
    if gamma >= Rational::one() {
        return Err(Error::Regime(format!(
            "dense construction needs gamma < 1, got {}",
            rational::format(&gamma)
        )));
    }
    let inv = gamma.recip();
    let group_size = rational::floor_i64(&inv).ok_or_else(|| Error::Regime("gamma too small".into()))? as usize + 1;
    if k_max <= group_size {
        return Err(Error::Regime(format!("K must exceed floor(1/gamma) + 1 = {group_size}, got {k_max}")));
    }
    if !n.is_multiple_of(group_size) {
        return Err(Error::Regime(format!("n = {n} is not divisible by the group size {group_size}")));
    }
    let ceil = rational::ceil_i64(&inv).expect("fits since floor does") as usize;
    // Keeps every host at no more than K invitees even when 1/gamma is an integer.
    let guest_draws = (k_max + 1 - ceil).min(k_max + 1 - group_size);
    if guest_draws > n {
        return Err(Error::Regime(format!("n = {n} is too small for {guest_draws} guests per group")));
    }
    let groups: Vec<Vec<AgentId>> = (0..n / group_size)
        .map(|i| (i * group_size..(i + 1) * group_size).collect())
        .collect();
    let mut covered: HashSet<(AgentId, AgentId)> = HashSet::new();
    let pair = |x: AgentId, y: AgentId| (x.min(y), x.max(y));
    for group in &groups {
        for (i, &x) in group.iter().enumerate() {
            for &y in &group[i + 1..] {
                covered.insert(pair(x, y));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut guests = Vec::with_capacity(groups.len());
    for group in &groups {
        let mut members: Vec<AgentId> = group.clone();
        let mut kept = Vec::new();
        for x in sample(&mut rng, n, guest_draws).into_iter() {
            if members.contains(&x) || members.iter().any(|&y| covered.contains(&pair(x, y))) {
                continue;
            }
            for &y in &members {
                covered.insert(pair(x, y));
            }
            members.push(x);
            kept.push(x);
        }
        kept.sort_unstable();
        guests.push(kept);
    }
    let rate = rational::ratio(1, group_size as i64);
    let mut config = EventConfiguration::empty(params.with_n(n));
    for (group, extra) in groups.iter().zip(&guests) {
        let everyone: BTreeSet<AgentId> = group.iter().chain(extra).copied().collect();
        for &v in group {
            let targets: BTreeMap<AgentId, Rational> =
                everyone.iter().filter(|&&u| u != v).map(|&u| (u, rate.clone())).collect();
            config.set_strategy(v, realize_nested(&targets, v)?);
        }
    }
    Ok(DenseNetwork { config, group_size, groups, guests })
}
