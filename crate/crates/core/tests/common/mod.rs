#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;

use netgame_core::model::{AgentId, Event, EventConfiguration, FixedCost, InfinitesimalUtility, Parameters};
use netgame_core::rational::{from_usize, max_of, ratio, Rational};
use netgame_core::stability::DeficitProfile;
use netgame_core::Graph;
use proptest::prelude::*;
use rand::Rng;

/// Small configuration with random events whose rates have denominators
/// at most `max_den`.
pub fn random_config<R: Rng>(rng: &mut R, n: usize, max_events: usize, max_den: i64, params: Parameters) -> EventConfiguration {
    let mut config = EventConfiguration::empty(params.with_n(n));
    for host in 0..n {
        for _ in 0..rng.gen_range(0..=max_events) {
            let invitees: BTreeSet<AgentId> = (0..n).filter(|&u| u != host && rng.gen_bool(0.5)).collect();
            if invitees.is_empty() {
                continue;
            }
            let den = rng.gen_range(1..=max_den);
            let num = rng.gen_range(1..=den);
            config.push_event(Event::new(host, invitees, ratio(num, den)).unwrap()).unwrap();
        }
    }
    config
}

pub fn random_gamma<R: Rng>(rng: &mut R, max_den: i64) -> Rational {
    let den = rng.gen_range(2..=max_den);
    ratio(rng.gen_range(1..=2 * den), den)
}

pub fn eps_params(gamma: &Rational, n: usize) -> Parameters {
    Parameters::from_gamma(gamma, n).unwrap()
}

pub fn concrete_params(gamma: &Rational, b: Rational, n: usize) -> Parameters {
    Parameters::from_gamma(gamma, n).unwrap().with_b(FixedCost::Value(b))
}

/// Best utility over every subset of the candidates, each supported at
/// exactly its deficit by a nested realization.
pub fn exhaustive_best(params: &Parameters, profile: &DeficitProfile) -> InfinitesimalUtility {
    let candidates = profile.candidates(&params.gamma());
    let free = from_usize(profile.free().len());
    let mut best: Option<InfinitesimalUtility> = None;
    for mask in 0u32..(1 << candidates.len()) {
        let chosen: Vec<&Rational> =
            candidates.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, (e, _))| e).collect();
        let spent: Rational = chosen.iter().copied().cloned().sum();
        let value = InfinitesimalUtility::new(
            &params.a * (&free + from_usize(chosen.len())) - &params.c * spent,
            -max_of(chosen.iter().copied()),
        );
        if best.as_ref().is_none_or(|b| value.compare(b, &params.b) == Ordering::Greater) {
            best = Some(value);
        }
    }
    best.unwrap()
}

prop_compose! {
    pub fn arb_rational(max_den: i64)(den in 1..=max_den)(num in 1..=den, den in Just(den)) -> Rational {
        ratio(num, den)
    }
}

prop_compose! {
    pub fn arb_event(n: usize)(host in 0..n)(
        host in Just(host),
        invitees in proptest::collection::btree_set((0..n).prop_filter("not host", move |&u| u != host), 1..n),
        rate in arb_rational(12),
    ) -> Event {
        Event::new(host, invitees, rate).unwrap()
    }
}

prop_compose! {
    pub fn arb_config(max_n: usize)(n in 2..=max_n)(
        events in proptest::collection::vec(arb_event(n), 0..(3 * n)),
        gamma in (1i64..=24, 1i64..=12),
        concrete in proptest::option::of(arb_rational(6)),
        n in Just(n),
    ) -> EventConfiguration {
        let mut params = Parameters::from_gamma(&ratio(gamma.0, gamma.1), n).unwrap();
        if let Some(b) = concrete {
            params = params.with_b(FixedCost::Value(b));
        }
        EventConfiguration::from_events(params, events).unwrap()
    }
}

prop_compose! {
    pub fn arb_graph(max_n: usize, p: f64)(n in 1..=max_n)(
        bits in proptest::collection::vec(proptest::bool::weighted(p), n * (n - 1) / 2),
        n in Just(n),
    ) -> Graph {
        let mut g = Graph::new(n);
        let mut i = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits[i] {
                    g.add_edge(u, v);
                }
                i += 1;
            }
        }
        g
    }
}
