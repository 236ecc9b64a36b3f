//! Acceptance suite: one PASS/FAIL line per criterion, with the thresholds
//! and runtime limits pinned below. Exits non-zero if any criterion fails.
//!
//! Run with `cargo test -p netgame-core --test acceptance`.

mod common;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{eps_params, exhaustive_best, random_config, random_gamma};
use netgame_core::constructions::{
    build_clique, build_community_graph, build_dense_k_supportable, build_h32, build_hkp, build_hypergraph_network,
    clique_configuration, h32_configuration, hkp_sides, CommunitySkeleton, HypergraphSampler, HypergraphSpec, Join,
    JoinMode,
};
use netgame_core::degree_sequence::{powerlaw_sequence, realize};
use netgame_core::dynamics::{run_dynamics, DynamicsPolicy, TraceStatus, UpdateOrder};
use netgame_core::io::{self, parse_config_str};
use netgame_core::metrics::{
    average_degree, clustering_coefficient, max_invitees, verify_clustering_bound, verify_k_supportable_degree_bound,
};
use netgame_core::model::{connection_graph, cost, EventConfiguration, FixedCost, Parameters};
use netgame_core::rational::{self, from_usize, int, max_of, ratio, Rational};
use netgame_core::stability::{
    best_response, best_response_from_profile, check_stability_criterion, check_stability_deviation, realization_cost,
    realize_nested, DeficitProfile, StabilityReport,
};
use netgame_core::Graph;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Byte-level artifacts and stable graphs gathered while the criteria run.
#[derive(Default)]
struct Suite {
    artifacts: Vec<(String, String)>,
    stable_graphs: Vec<(String, Graph)>,
    construction_outputs: Vec<(String, EventConfiguration)>,
}

impl Suite {
    fn record(&mut self, name: impl Into<String>, text: String) {
        self.artifacts.push((name.into(), text));
    }

    fn config(&mut self, name: impl Into<String>, config: &EventConfiguration) {
        self.record(name, io::config_to_json(config));
    }

    fn report(&mut self, name: impl Into<String>, report: &StabilityReport) {
        self.record(name, io::to_pretty(report));
    }

    /// Keeps the connection graph for the clustering check if connected.
    fn stable_graph(&mut self, name: impl Into<String>, config: &EventConfiguration) {
        let graph = connection_graph(config).graph;
        if graph.is_connected() {
            self.stable_graphs.push((name.into(), graph));
        }
    }

    fn construction(&mut self, name: &str, config: &EventConfiguration) {
        self.config(format!("{name}/config"), config);
        self.stable_graph(name, config);
        self.construction_outputs.push((name.to_string(), config.clone()));
    }
}

struct Verdict {
    pass: bool,
    detail: String,
    findings: Vec<String>,
}

impl Verdict {
    fn new(failures: Vec<String>, summary: String) -> Self {
        let pass = failures.is_empty();
        let detail = if pass { summary } else { format!("{summary}; first failure: {}", failures[0]) };
        Self { pass, detail, findings: Vec::new() }
    }
}

fn params(num: i64, den: i64, n: usize) -> Parameters {
    eps_params(&ratio(num, den), n)
}

fn both_checkers(config: &EventConfiguration) -> (bool, bool) {
    let deviation = check_stability_deviation(config).stable;
    let criterion = check_stability_criterion(config).expect("vanishing b").stable;
    (deviation, criterion)
}

fn compact(config: &EventConfiguration) -> String {
    serde_json::to_string(&io::config_to_doc(config)).unwrap()
}

fn complete_graph(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Rational grid straddling `1/l`: offsets of one part in 10, 100 and 1000
/// on either side, the threshold itself, and a few values above.
fn straddle_grid(l: i64) -> Vec<Rational> {
    let t = ratio(1, l);
    let mut grid = vec![t.clone(), ratio(1, 1), ratio(3, 2), ratio(2, 1)];
    for den in [10, 100, 1000] {
        let step = &t / int(den);
        grid.push(&t - &step);
        grid.push(&t + &step);
    }
    grid.sort();
    grid.dedup();
    grid
}

fn criterion_1(suite: &mut Suite) -> Verdict {
    let mut failures = Vec::new();
    let mut checked = 0;
    for l in 2..=10usize {
        let threshold = ratio(1, l as i64);
        for gamma in straddle_grid(l as i64) {
            let config = clique_configuration(&eps_params(&gamma, l), l).unwrap();
            let expected = gamma > threshold;
            let (deviation, criterion) = both_checkers(&config);
            checked += 1;
            if deviation != expected || criterion != expected {
                failures.push(format!(
                    "l={l} gamma={}: deviation={deviation} criterion={criterion}, expected {expected}",
                    rational::format(&gamma)
                ));
            }
            suite.report(format!("c1/l{l}/{}", rational::format(&gamma)), &check_stability_deviation(&config));
        }
        let built = build_clique(&eps_params(&ratio(1, l as i64 - 1).min(ratio(1, 1)), l), l);
        match built {
            Ok(config) => suite.construction(&format!("clique-{l}"), &config),
            Err(e) => failures.push(format!("build_clique l={l}: {e}")),
        }
    }
    Verdict::new(failures, format!("{checked} (l, gamma) points, both checkers agree with gamma > 1/l"))
}

fn single_host(params: &Parameters, n: usize) -> EventConfiguration {
    let mut config = EventConfiguration::empty(params.with_n(n));
    config.host(0, 1..n, Rational::one()).unwrap();
    config
}

fn criterion_2(suite: &mut Suite) -> Verdict {
    let (a, c) = (int(3), int(2));
    let gamma = &a / &c;
    let boundary = &c * (&gamma - Rational::one());
    let mut failures = Vec::new();
    let mut findings = Vec::new();
    for n in [2usize, 5, 20] {
        for b in [ratio(1, 2), ratio(99, 100), ratio(101, 100), ratio(3, 2)] {
            let p = Parameters::new(a.clone(), FixedCost::Value(b.clone()), c.clone(), n).unwrap();
            let config = single_host(&p, n);
            let report = check_stability_deviation(&config);
            let expected = b < boundary;
            let derived = b <= &boundary * from_usize(n - 1);
            suite.report(format!("c2/n{n}/b{}", rational::format(&b)), &report);
            if report.stable != expected {
                failures.push(format!(
                    "n={n} b={}: stable={}, expected {expected} from b < c(gamma-1)",
                    rational::format(&b),
                    report.stable
                ));
            }
            if report.stable != derived {
                findings.push(format!("n={n} b={}: deviation verdict disagrees with b <= c(gamma-1)(n-1)", rational::format(&b)));
            }
        }
    }
    let ok = Parameters::new(a.clone(), FixedCost::Value(ratio(1, 2)), c.clone(), 5).unwrap();
    match netgame_core::constructions::build_complete_single_host(&ok, 5) {
        Ok(config) => suite.construction("complete-5", &config),
        Err(e) => failures.push(format!("build_complete_single_host: {e}")),
    }
    let summary = format!("{}/12 (n, b) points agree with b < c(gamma-1)", 12 - failures.len());
    let mut verdict = Verdict::new(failures, summary);
    if !verdict.pass {
        findings.push("the host's deviation gain is (a-c)(n-1)-b, so the exact threshold is b <= c(gamma-1)(n-1)".into());
    }
    verdict.findings = findings;
    verdict
}

fn is_two_leaf_star(g: &Graph) -> bool {
    g.n() == 3 && g.edge_count() == 2
}

fn random_star_attempt(rng: &mut ChaCha8Rng, biased: bool) -> EventConfiguration {
    let gamma = random_gamma(rng, 12);
    if !biased {
        return random_config(rng, 3, 2, 12, eps_params(&gamma, 3));
    }
    // Events only along the two star edges, plus optionally one event
    // gathering both leaves at the centre below rate 1.
    let mut config = EventConfiguration::empty(eps_params(&gamma, 3));
    let center = rng.gen_range(0..3);
    let leaves: Vec<usize> = (0..3).filter(|&u| u != center).collect();
    let rate = |rng: &mut ChaCha8Rng| {
        let den = rng.gen_range(1..=12);
        ratio(rng.gen_range(1..=den), den)
    };
    for &leaf in &leaves {
        if rng.gen_bool(0.7) {
            let r = rate(rng);
            config.host(center, [leaf], r).unwrap();
        }
        if rng.gen_bool(0.7) {
            let r = rate(rng);
            config.host(leaf, [center], r).unwrap();
        }
    }
    if rng.gen_bool(0.5) {
        let r = rate(rng);
        config.host(center, leaves.clone(), r).unwrap();
    }
    config
}

fn criterion_3(suite: &mut Suite) -> Verdict {
    let mut failures = Vec::new();
    let mut bridge_points = 0;
    for den in 1..=12i64 {
        for num in 1..=2 * den {
            let gamma = ratio(num, den);
            let mut config = EventConfiguration::empty(eps_params(&gamma, 2));
            config.host(0, [1], ratio(1, 2)).unwrap();
            config.host(1, [0], ratio(1, 2)).unwrap();
            let (deviation, criterion) = both_checkers(&config);
            let expected = gamma > ratio(1, 2);
            bridge_points += 1;
            if deviation != expected || criterion != expected {
                failures.push(format!("bridge gamma={}: {deviation}/{criterion}", rational::format(&gamma)));
            }
            if gamma == ratio(3, 4) {
                suite.construction("bridge", &config);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut stars = 0;
    for attempt in 0..40_000 {
        let config = random_star_attempt(&mut rng, attempt % 2 == 1);
        if !is_two_leaf_star(&connection_graph(&config).graph) {
            continue;
        }
        stars += 1;
        let report = check_stability_deviation(&config);
        if report.stable {
            failures.push(format!("star accepted: {}", compact(&config)));
        }
        if stars <= 20 {
            suite.report(format!("c3/star{stars}"), &report);
        }
    }
    if stars < 1000 {
        failures.push(format!("only {stars} star configurations were generated"));
    }
    Verdict::new(
        failures,
        format!("bridge stable iff gamma > 1/2 on {bridge_points} points; {stars} random two-leaf stars all rejected"),
    )
}

fn hkp_expected(k: usize, p: usize) -> Graph {
    let (shared, a, b) = hkp_sides(k, p);
    let mut g = Graph::new(2 * k - p);
    for side in [&a, &b] {
        let members: Vec<usize> = shared.iter().chain(side.iter()).copied().collect();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Ten points `lo + (1 - lo) i / 10`, `i = 1..=10`.
fn ten_point_grid(lo: &Rational) -> Vec<Rational> {
    (1..=10).map(|i| lo + (Rational::one() - lo) * ratio(i, 10)).collect()
}

fn criterion_4(suite: &mut Suite) -> Verdict {
    let mut failures = Vec::new();
    let mut points = 0;
    let pairs = [(3, 1), (4, 1), (5, 1), (6, 1), (4, 2), (5, 2), (6, 2), (5, 3), (6, 3), (6, 4)];
    for (k, p) in pairs {
        let lo = if p == 1 { ratio(1, k as i64) } else { ratio(1, (k - p) as i64) };
        let expected = hkp_expected(k, p);
        for gamma in ten_point_grid(&lo) {
            points += 1;
            let label = format!("hkp k={k} p={p} gamma={}", rational::format(&gamma));
            match build_hkp(&eps_params(&gamma, 1), k, p) {
                Ok(config) => {
                    let (deviation, criterion) = both_checkers(&config);
                    if connection_graph(&config).graph != expected || !deviation || !criterion {
                        failures.push(format!("{label}: graph or stability check failed ({deviation}/{criterion})"));
                    }
                    suite.construction(&format!("hkp-{k}-{p}-{}", rational::format(&gamma)), &config);
                }
                Err(e) => failures.push(format!("{label}: {e}")),
            }
        }
    }
    let mut two_triangles = complete_graph(4);
    two_triangles.remove_edge(0, 1);
    for gamma in ten_point_grid(&ratio(1, 2)) {
        points += 1;
        match build_h32(&eps_params(&gamma, 4)) {
            Ok(config) => {
                let (deviation, criterion) = both_checkers(&config);
                let g = connection_graph(&config).graph;
                if g.edge_count() != 5 || !deviation || !criterion {
                    failures.push(format!("h32 gamma={}: {deviation}/{criterion}", rational::format(&gamma)));
                }
                suite.construction(&format!("h32-{}", rational::format(&gamma)), &config);
            }
            Err(e) => failures.push(format!("h32 gamma={}: {e}", rational::format(&gamma))),
        }
    }
    let fixtures = [
        (include_str!("fixtures/h32_51_100.json"), ratio(51, 100)),
        (include_str!("fixtures/h32_3_5.json"), ratio(3, 5)),
        (include_str!("fixtures/h32_9_10.json"), ratio(9, 10)),
    ];
    for (text, gamma) in fixtures {
        let fixture = parse_config_str(text).unwrap();
        let label = rational::format(&gamma);
        if fixture.params.gamma() != gamma || !both_checkers(&fixture).0 {
            failures.push(format!("fixture {label} is not stable at its own gamma"));
        }
        if check_stability_deviation(&fixture.with_params(params(9, 20, 4))).stable {
            failures.push(format!("fixture {label} is stable at gamma = 9/20"));
        }
    }
    let closed_form = h32_configuration(&params(9, 20, 4)).unwrap();
    if check_stability_deviation(&closed_form).stable {
        failures.push("closed-form two-triangle rates are stable at gamma = 9/20".into());
    }
    Verdict::new(failures, format!("{points} builder points validated; fixtures stable at 0.51/0.6/0.9, unstable at 0.45"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Disagreement {
    /// The best response adds targets on top of the current, correctly
    /// rated invitees.
    ExtendsInvitees,
    /// The best response keeps the same targets and rates but realizes
    /// them more cheaply.
    NonMinimalRealization,
    Unexplained,
}

fn classify(config: &EventConfiguration, report: &StabilityReport) -> Disagreement {
    let mut worst = Disagreement::ExtendsInvitees;
    for agent in report.agents() {
        let best = best_response(config, agent);
        let own: BTreeMap<usize, Rational> =
            config.strategies[agent].invitation_rates().into_iter().filter(|(_, r)| r.is_positive()).collect();
        let class = if best.target_rates == own {
            Disagreement::NonMinimalRealization
        } else if own.iter().all(|(u, r)| best.target_rates.get(u) == Some(r)) && best.target_rates.len() > own.len() {
            Disagreement::ExtendsInvitees
        } else {
            Disagreement::Unexplained
        };
        worst = worst.max(class);
    }
    worst
}

fn criterion_5(suite: &mut Suite) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut corpus = Vec::new();
    for _ in 0..600 {
        let n = rng.gen_range(2..=6);
        let gamma = random_gamma(&mut rng, 12);
        corpus.push(random_config(&mut rng, n, 2, 12, eps_params(&gamma, n)));
    }
    let mut converged = 0;
    for i in 0..200u64 {
        let n = rng.gen_range(2..=6);
        let gamma = random_gamma(&mut rng, 12);
        let start = random_config(&mut rng, n, 2, 12, eps_params(&gamma, n));
        let order = if i % 2 == 0 { UpdateOrder::RoundRobin } else { UpdateOrder::UniformRandom };
        let (last, trace) = run_dynamics(&start, &DynamicsPolicy::new(order, 30, i)).unwrap();
        if trace.status == TraceStatus::Converged {
            converged += 1;
            suite.stable_graph(format!("c5/dynamics{i}"), &last);
            corpus.push(last);
        }
    }
    let mut failures = Vec::new();
    let mut findings = Vec::new();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, config) in corpus.iter().enumerate() {
        let deviation = check_stability_deviation(config);
        let criterion = check_stability_criterion(config).unwrap();
        suite.report(format!("c5/{i}/deviation"), &deviation);
        suite.report(format!("c5/{i}/criterion"), &criterion);
        let key = match (criterion.stable, deviation.stable) {
            (true, true) => "both stable",
            (false, false) => "both unstable",
            (false, true) => {
                failures.push(format!("criterion rejects a deviation-stable configuration: {}", compact(config)));
                "criterion-only rejection"
            }
            (true, false) => match classify(config, &deviation) {
                Disagreement::ExtendsInvitees => "criterion-only acceptance, best response extends invitees",
                Disagreement::NonMinimalRealization => "criterion-only acceptance, non-minimal realization",
                Disagreement::Unexplained => {
                    failures.push(format!("unexplained disagreement: {}", compact(config)));
                    "criterion-only acceptance, unexplained"
                }
            },
        };
        let seen = counts.entry(key).or_default();
        *seen += 1;
        if *seen == 1 && key.starts_with("criterion-only") {
            findings.push(format!("{key}: {}", compact(config)));
        }
    }
    if corpus.len() < 500 {
        failures.push(format!("only {} configurations", corpus.len()));
    }
    let tally: Vec<String> = counts.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    let mut verdict =
        Verdict::new(failures, format!("{} configurations ({converged} from dynamics); {}", corpus.len(), tally.join(", ")));
    verdict.findings = findings;
    verdict
}

fn criterion_6(suite: &mut Suite) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    let mut largest = 0;
    for i in 0..200 {
        let n = rng.gen_range(2..=13);
        let gamma = ratio(rng.gen_range(1..=24), rng.gen_range(1..=12));
        let mut p = eps_params(&gamma, n);
        if i % 3 == 0 {
            p = p.with_b(FixedCost::Value(ratio(rng.gen_range(0..=6), rng.gen_range(1..=4))));
        }
        let mut explicit = BTreeMap::new();
        for u in 1..n {
            if rng.gen_bool(0.8) {
                let den = rng.gen_range(1..=12);
                explicit.insert(u, ratio(rng.gen_range(-4..=den), den));
            }
        }
        let profile = DeficitProfile { v: 0, n, explicit };
        largest = largest.max(profile.candidates(&p.gamma()).len());
        let best = best_response_from_profile(&p, &profile);
        let exhaustive = exhaustive_best(&p, &profile);
        if best.utility.compare(&exhaustive, &p.b) != Ordering::Equal {
            failures.push(format!("profile {i}: prefix {} vs exhaustive {}", best.utility.render(), exhaustive.render()));
        }
        if !best.target_rates.is_empty() {
            let strategy = realize_nested(&best.target_rates, 0).unwrap();
            let sum: Rational = best.target_rates.values().cloned().sum();
            let expected = (&p.c * sum, max_of(best.target_rates.values()));
            let paid = cost(&p, &strategy);
            if (paid.main.clone(), paid.b_coeff.clone()) != expected || paid != realization_cost(&p, &best.target_rates) {
                failures.push(format!("profile {i}: nested cost {} differs from b*max + c*sum", paid.render()));
            }
        }
        suite.record(format!("c6/{i}"), best.utility.render());
    }
    if largest > 12 {
        failures.push(format!("a profile had {largest} candidates, above 12"));
    }
    Verdict::new(failures, format!("200 profiles (up to {largest} candidates): prefix search optimal, nested cost exact"))
}

fn criterion_7(suite: &mut Suite) -> Verdict {
    let mut failures = Vec::new();
    let mut degenerate = 0;
    for (name, graph) in &suite.stable_graphs {
        let bound = verify_clustering_bound(graph).unwrap();
        if bound.degenerate {
            degenerate += 1;
            continue;
        }
        if !bound.holds {
            failures.push(format!(
                "{name}: clustering {} < {}",
                rational::format(&bound.lhs),
                rational::format(&bound.rhs)
            ));
        }
    }
    Verdict::new(
        failures,
        format!(
            "{} connected stable graphs checked exactly ({degenerate} without a vertex of degree 2, reported only)",
            suite.stable_graphs.len() - degenerate
        ),
    )
}

fn criterion_8(suite: &mut Suite) -> Verdict {
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    let k = 4;
    for seed in 0..5u64 {
        let spec = HypergraphSpec { n: 3000, k, d: 3, seed, sampler: HypergraphSampler::GirthAware };
        let net = match build_hypergraph_network(&params(1, 2, 3000), &spec) {
            Ok(net) => net,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let graph = connection_graph(&net.config).graph;
        let clustering = clustering_coefficient(&graph);
        let d = average_degree(&graph);
        let limit = ratio(11, 10) * from_usize(k - 2) / (&d - Rational::one());
        let stable = check_stability_deviation(&net.config).stable;
        let fraction = net.removed_fraction();
        lines.push(format!(
            "seed {seed}: removed {fraction:.4}, clustering {:.4} <= {:.4}, avg degree {:.3}",
            rational::to_f64(&clustering),
            rational::to_f64(&limit),
            rational::to_f64(&d)
        ));
        if !stable || fraction >= 0.05 || clustering > limit {
            failures.push(format!("seed {seed}: stable={stable} {}", lines.last().unwrap()));
        }
        suite.construction(&format!("hypergraph-{seed}"), &net.config);
    }
    let mut verdict = Verdict::new(failures, lines.join("; "));
    let reference = HypergraphSpec { n: 3000, k, d: 3, seed: 0, sampler: HypergraphSampler::Uniform };
    if let Ok(net) = build_hypergraph_network(&params(1, 2, 3000), &reference) {
        let graph = connection_graph(&net.config).graph;
        verdict.findings.push(format!(
            "uniform sampler reference (seed 0, not judged): removed {:.4}, clustering {:.4}, avg degree {:.3}",
            net.removed_fraction(),
            rational::to_f64(&clustering_coefficient(&graph)),
            rational::to_f64(&average_degree(&graph))
        ));
    }
    verdict
}

fn criterion_9(suite: &mut Suite) -> Verdict {
    let mut failures = Vec::new();
    let k_max = 6;
    let p = params(2, 5, 3000);
    let net = match build_dense_k_supportable(&p, 3000, k_max, 1) {
        Ok(net) => net,
        Err(e) => return Verdict::new(vec![e.to_string()], "dense construction failed".into()),
    };
    let stable = check_stability_deviation(&net.config).stable;
    let invitees = max_invitees(&net.config);
    let bound = verify_k_supportable_degree_bound(&net.config, k_max).unwrap();
    let lower = ratio(9, 10) * from_usize(k_max * (k_max + 1)) / from_usize(net.group_size);
    let d = bound.average_degree.clone();
    if !stable || invitees > k_max || !bound.holds || d < lower {
        failures.push(format!("stable={stable} max invitees={invitees} upper holds={}", bound.holds));
    }
    suite.construction("dense", &net.config);
    Verdict::new(
        failures,
        format!(
            "avg degree {} in [{}, {}], max invitees {invitees}, stable {stable}",
            rational::format(&d),
            rational::format(&lower),
            rational::format(&bound.bound)
        ),
    )
}

fn histogram(degrees: &[usize]) -> BTreeMap<usize, i64> {
    let mut h = BTreeMap::new();
    for &d in degrees {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

fn criterion_10(suite: &mut Suite) -> Verdict {
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    let degrees = powerlaw_sequence(2.5, 2000).unwrap();
    let p = params(11, 20, 2000);
    for seed in [11u64, 12, 13] {
        let report = match realize(&degrees, &p, seed) {
            Ok(report) => report,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let graph = connection_graph(&report.config).graph;
        let achieved = graph.degrees();
        let connected = graph.is_connected();
        let stable = check_stability_deviation(&report.config).stable;
        let cap = report.k_used + 3;
        let supportable = max_invitees(&report.config) <= cap
            && verify_k_supportable_degree_bound(&report.config, cap).is_ok_and(|b| b.holds);
        let within_budget = report.l1_shift <= report.budget + report.fallback_shift;
        let deltas = report.logged_deltas();
        let logged = report.logged_vertices();
        let per_vertex = (0..degrees.len()).all(|v| {
            let diff = achieved[v] as i64 - degrees[v] as i64;
            diff == deltas.get(&v).copied().unwrap_or(0) && (diff == 0 || logged.contains(&v))
        });
        // Histogram difference must be exactly what the logged vertices move.
        let mut expected = histogram(&degrees);
        for &v in &logged {
            *expected.entry(degrees[v]).or_insert(0) -= 1;
            *expected.entry(achieved[v]).or_insert(0) += 1;
        }
        expected.retain(|_, c| *c != 0);
        let histogram_ok = expected == histogram(&achieved) && achieved == report.achieved;
        lines.push(format!(
            "seed {seed}: K={} l1={} budget={} fallback={} max invitees={}",
            report.k_used,
            report.l1_shift,
            report.budget,
            report.fallback_shift,
            report.max_invitees()
        ));
        if !(connected && stable && supportable && within_budget && per_vertex && histogram_ok) {
            failures.push(format!(
                "seed {seed}: connected={connected} stable={stable} supportable={supportable} budget={within_budget} \
                 per-vertex={per_vertex} histogram={histogram_ok}"
            ));
        }
        suite.record(format!("degree-seq-{seed}/report"), io::to_pretty(&io::realization_json(&report)));
        suite.construction(&format!("degree-seq-{seed}"), &report.config);
    }
    Verdict::new(failures, lines.join("; "))
}

fn criterion_11(suite: &mut Suite) -> Verdict {
    let mut failures = Vec::new();
    let bridged = CommunitySkeleton {
        clique_sizes: vec![4, 4, 4],
        joins: vec![Join::new(0, 1, JoinMode::Bridge), Join::new(1, 2, JoinMode::Bridge)],
    };
    let overlapping = CommunitySkeleton { clique_sizes: vec![4, 4], joins: vec![Join::overlap(0, 1, 2)] };
    for (name, skeleton) in [("community-bridged", bridged), ("community-overlap", overlapping)] {
        match build_community_graph(&params(3, 5, 1), &skeleton) {
            Ok(net) => suite.construction(name, &net.config),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let outputs = suite.construction_outputs.clone();
    for (name, config) in &outputs {
        let (last, trace) = run_dynamics(config, &DynamicsPolicy::new(UpdateOrder::RoundRobin, 1, 0)).unwrap();
        if trace.status != TraceStatus::Converged || trace.changes != 0 || &last != config {
            failures.push(format!("{name} is not a zero-change fixed point"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut runs, mut converged) = (0, 0);
    for i in 0..150u64 {
        let n = rng.gen_range(2..=6);
        let gamma = random_gamma(&mut rng, 10);
        let start = random_config(&mut rng, n, 2, 10, eps_params(&gamma, n));
        for order in [UpdateOrder::RoundRobin, UpdateOrder::UniformRandom] {
            runs += 1;
            let (last, trace) = run_dynamics(&start, &DynamicsPolicy::new(order, 40, i)).unwrap();
            let lines: Vec<String> = trace.records.iter().map(|r| serde_json::to_string(r).unwrap()).collect();
            suite.record(format!("c11/{i}/{order:?}/trace"), lines.join("\n"));
            suite.config(format!("c11/{i}/{order:?}/final"), &last);
            if trace.status == TraceStatus::Converged {
                converged += 1;
                if !check_stability_deviation(&last).stable {
                    failures.push(format!("run {i} {order:?} converged to an unstable configuration"));
                }
                suite.stable_graph(format!("c11/{i}/{order:?}"), &last);
            }
        }
    }
    Verdict::new(
        failures,
        format!("{} construction outputs are fixed points; {converged}/{runs} random runs converged, all stable", outputs.len()),
    )
}

type Criterion = fn(&mut Suite) -> Verdict;

const CRITERIA: [(usize, &str, u64, Criterion); 10] = [
    (1, "clique threshold", 1, criterion_1),
    (2, "single-host complete graph", 1, criterion_2),
    (3, "bridge and two-leaf star", 30, criterion_3),
    (4, "two cliques sharing vertices, two triangles", 5, criterion_4),
    (5, "checker concordance", 120, criterion_5),
    (6, "best-response optimality", 30, criterion_6),
    (8, "hypergraph clustering", 60, criterion_8),
    (9, "dense K-supportable bounds", 60, criterion_9),
    (10, "degree-sequence realization", 120, criterion_10),
    (11, "dynamics fixed points", 60, criterion_11),
];

fn main() -> ExitCode {
    let mut suite = Suite::default();
    let mut lines: BTreeMap<usize, (bool, String)> = BTreeMap::new();
    let mut record = |number: usize, name: &str, verdict: Verdict, elapsed: Duration, limit: Option<u64>| {
        let in_time = limit.is_none_or(|l| elapsed <= Duration::from_secs(l));
        let pass = verdict.pass && in_time;
        let limit_text = limit.map_or("no limit".to_string(), |l| format!("limit {l}s"));
        let mut text = format!(
            "{} criterion {number} ({name}): {} [{:.2}s, {limit_text}]",
            if pass { "PASS" } else { "FAIL" },
            verdict.detail,
            elapsed.as_secs_f64()
        );
        if !in_time {
            text.push_str(" runtime limit exceeded");
        }
        for finding in &verdict.findings {
            text.push_str(&format!("\n    finding: {finding}"));
        }
        lines.insert(number, (pass, text));
    };

    for (number, name, limit, run) in CRITERIA {
        let start = Instant::now();
        let verdict = run(&mut suite);
        record(number, name, verdict, start.elapsed(), Some(limit));
    }
    let start = Instant::now();
    let verdict = criterion_7(&mut suite);
    record(7, "clustering lower bound", verdict, start.elapsed(), None);

    let start = Instant::now();
    let mut again = Suite::default();
    for (_, _, _, run) in CRITERIA {
        run(&mut again);
    }
    let mismatch = suite
        .artifacts
        .iter()
        .zip(&again.artifacts)
        .find(|(a, b)| a != b)
        .map(|(a, _)| a.0.clone());
    let same_count = suite.artifacts.len() == again.artifacts.len();
    let verdict = match (&mismatch, same_count) {
        (None, true) => Verdict::new(vec![], format!("{} artifacts byte-identical across two runs", suite.artifacts.len())),
        _ => Verdict::new(
            vec![format!("artifact {mismatch:?} differs (counts {} vs {})", suite.artifacts.len(), again.artifacts.len())],
            "re-run differs".into(),
        ),
    };
    record(12, "determinism", verdict, start.elapsed(), None);

    let mut failed = 0;
    for (pass, text) in lines.values() {
        println!("{text}");
        if !pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
