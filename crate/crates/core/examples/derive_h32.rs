//! Derives the event rates of the stable configuration on K4 minus an edge
//! by exact Gaussian elimination, then checks the result against the
//! closed form used by `build_h32` and against both stability checkers.
//!
//! Agents: x, w (degree 3), u, v (the non-adjacent pair). Each agent hosts
//! nested events, so two invitees of the same host meet at the smaller of
//! their two target rates. Unknowns:
//!   w -> (u, x, v) = (p, q, r)      x -> (u, w, v) = (p', q', r')
//!   u -> (w, x)    = (s, s')        v -> (w, x)    = (t, t')
//! Assumed order of the nested minima (confirmed on the solution):
//!   p <= q <= r, r' <= q' <= p', s' <= s, t <= t'.
//! Equations: every edge meets at exactly 1, the pair u, v meets at exactly
//! 1 - gamma (deficit gamma, just outside the target range), r = 1/2,
//! r' = (1 - gamma)/2, and q = q' = s'.
//!
//! Run with `cargo run --example derive_h32 -p netgame-core`.

use netgame_core::constructions::{h32_configuration, h32_targets, H32_U, H32_V, H32_W, H32_X};
use netgame_core::rational::{self, ratio, Rational};
use netgame_core::stability::{check_stability_criterion, check_stability_deviation};
use netgame_core::Parameters;
use num_traits::{One, Zero};

const NAMES: [&str; 10] = ["p", "q", "r", "p'", "q'", "r'", "s", "s'", "t", "t'"];
const P: usize = 0;
const Q: usize = 1;
const R: usize = 2;
const P2: usize = 3;
const Q2: usize = 4;
const R2: usize = 5;
const S: usize = 6;
const S2: usize = 7;
const T: usize = 8;
const T2: usize = 9;

fn row(terms: &[(usize, i64)], rhs: Rational) -> (Vec<Rational>, Rational) {
    let mut coeffs = vec![Rational::zero(); NAMES.len()];
    for &(i, c) in terms {
        coeffs[i] += Rational::from_integer(c.into());
    }
    (coeffs, rhs)
}

fn system(gamma: &Rational) -> Vec<(Vec<Rational>, Rational)> {
    let one = Rational::one();
    vec![
        // x-u: x's own rate, u's own rate, and w's event holding both (min(q, p) = p).
        row(&[(P2, 1), (S2, 1), (P, 1)], one.clone()),
        // x-v: min(q, r) = q at w.
        row(&[(R2, 1), (T2, 1), (Q, 1)], one.clone()),
        // w-u: min(q', p') = q' at x.
        row(&[(P, 1), (S, 1), (Q2, 1)], one.clone()),
        // w-v: min(q', r') = r' at x.
        row(&[(R, 1), (T, 1), (R2, 1)], one.clone()),
        // x-w: min(s, s') = s' at u, min(t, t') = t at v.
        row(&[(Q, 1), (Q2, 1), (S2, 1), (T, 1)], one.clone()),
        // u-v: min(p', r') = r' at x, min(p, r) = p at w.
        row(&[(R2, 1), (P, 1)], &one - gamma),
        row(&[(R, 1)], ratio(1, 2)),
        row(&[(R2, 2)], &one - gamma),
        row(&[(Q, 1), (Q2, -1)], Rational::zero()),
        row(&[(Q, 1), (S2, -1)], Rational::zero()),
    ]
}

fn solve(mut rows: Vec<(Vec<Rational>, Rational)>) -> Vec<Rational> {
    let n = NAMES.len();
    for col in 0..n {
        let pivot = (col..rows.len()).find(|&r| !rows[r].0[col].is_zero()).expect("system is non-singular");
        rows.swap(col, pivot);
        let (prow, prhs) = rows[col].clone();
        let scale = prow[col].clone();
        for r in 0..rows.len() {
            if r != col && !rows[r].0[col].is_zero() {
                let factor = &rows[r].0[col] / &scale;
                for c in 0..n {
                    let delta = &factor * &prow[c];
                    rows[r].0[c] -= delta;
                }
                rows[r].1 -= &factor * &prhs;
            }
        }
    }
    (0..n).map(|i| &rows[i].1 / &rows[i].0[i]).collect()
}

fn check_order(x: &[Rational]) -> bool {
    x[P] <= x[Q] && x[Q] <= x[R] && x[R2] <= x[Q2] && x[Q2] <= x[P2] && x[S2] <= x[S] && x[T] <= x[T2]
}

fn main() {
    for (a, b) in [(51, 100), (3, 5), (9, 10), (1, 1), (9, 20)] {
        let gamma = ratio(a, b);
        let x = solve(system(&gamma));
        let rendered: Vec<String> =
            NAMES.iter().zip(&x).map(|(name, value)| format!("{name}={}", rational::format(value))).collect();
        println!("gamma = {}: {}", rational::format(&gamma), rendered.join(" "));

        let closed = h32_targets(&gamma);
        let agrees = closed[H32_W][&H32_U] == x[P]
            && closed[H32_W][&H32_X] == x[Q]
            && closed[H32_W][&H32_V] == x[R]
            && closed[H32_X][&H32_U] == x[P2]
            && closed[H32_X][&H32_W] == x[Q2]
            && closed[H32_X][&H32_V] == x[R2]
            && closed[H32_U][&H32_W] == x[S]
            && closed[H32_U][&H32_X] == x[S2]
            && closed[H32_V][&H32_W] == x[T]
            && closed[H32_V][&H32_X] == x[T2];
        let params = Parameters::from_gamma(&gamma, 4).expect("positive gamma");
        let config = h32_configuration(&params).expect("valid rates");
        let deviation = check_stability_deviation(&config);
        let criterion = check_stability_criterion(&config).expect("b is infinitesimal");
        println!(
            "  order assumption holds: {}, matches closed form: {agrees}, stable (deviation/criterion): {}/{}",
            check_order(&x),
            deviation.stable,
            criterion.stable
        );
    }
}
