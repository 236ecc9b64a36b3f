//! Admissibility conditions for degree sequences.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceDiagnostics {
    /// Smallest `K >= 3` with `#{2 <= d <= K} >= sum of d over d > K`.
    pub k: usize,
    pub low_count: usize,
    pub high_degree_sum: usize,
    pub twos: usize,
    pub twos_capacity: usize,
    pub ones: usize,
    pub at_least_four: usize,
}

/// `#{i : 2 <= d_i <= k}` and `sum_i d_i [d_i > k]`.
pub fn condition_one(degrees: &[usize], k: usize) -> (usize, usize) {
    let low = degrees.iter().filter(|&&d| (2..=k).contains(&d)).count();
    let high = degrees.iter().filter(|&&d| d > k).sum();
    (low, high)
}

/// `sum_i (d_i - 3) [d_i >= 6]`.
pub fn twos_capacity(degrees: &[usize]) -> usize {
    degrees.iter().filter(|&&d| d >= 6).map(|&d| d - 3).sum()
}

/// Smallest `K` (at least 3) satisfying condition one; `None` only for an
/// empty sequence.
pub fn smallest_k(degrees: &[usize]) -> Option<usize> {
    let max = *degrees.iter().max()?;
    (3..=max.max(3)).find(|&k| {
        let (low, high) = condition_one(degrees, k);
        low >= high
    })
}

pub fn check_entries(degrees: &[usize]) -> Result<()> {
    let n = degrees.len();
    if n < 2 {
        return Err(Error::InvalidInput("degree sequence needs at least 2 entries".into()));
    }
    if let Some((i, &d)) = degrees.iter().enumerate().find(|(_, &d)| d == 0 || d >= n) {
        return Err(Error::InvalidInput(format!("degree {d} at position {i} is outside [1, {}]", n - 1)));
    }
    Ok(())
}

pub fn check_gamma(gamma: &Rational) -> Result<()> {
    if *gamma <= rational::ratio(1, 2) || *gamma >= rational::ratio(2, 3) {
        return Err(Error::Regime(format!(
            "degree-sequence realization needs 1/2 < gamma < 2/3, got {}",
            rational::format(gamma)
        )));
    }
    Ok(())
}

/// Finds the smallest admissible `K` and checks the bounds on the number of
/// degree-2 and degree-1 entries.
pub fn validate_sequence(degrees: &[usize], gamma: &Rational) -> Result<SequenceDiagnostics> {
    check_gamma(gamma)?;
    check_entries(degrees)?;
    let k = smallest_k(degrees).ok_or_else(|| Error::Assumption { id: 1, detail: "no admissible K".into() })?;
    let (low_count, high_degree_sum) = condition_one(degrees, k);
    if low_count < high_degree_sum {
        return Err(Error::Assumption {
            id: 1,
            detail: format!("{low_count} vertices of degree in [2, {k}] cannot absorb degree {high_degree_sum}"),
        });
    }
    let twos = degrees.iter().filter(|&&d| d == 2).count();
    let capacity = twos_capacity(degrees);
    if twos > capacity {
        return Err(Error::Assumption {
            id: 2,
            detail: format!("{twos} degree-2 vertices exceed the capacity {capacity} of vertices of degree >= 6"),
        });
    }
    let ones = degrees.iter().filter(|&&d| d == 1).count();
    let at_least_four = degrees.iter().filter(|&&d| d >= 4).count();
    if 3 * ones > at_least_four {
        return Err(Error::Assumption {
            id: 3,
            detail: format!("{ones} degree-1 vertices exceed a third of the {at_least_four} vertices of degree >= 4"),
        });
    }
    Ok(SequenceDiagnostics {
        k,
        low_count,
        high_degree_sum,
        twos,
        twos_capacity: capacity,
        ones,
        at_least_four,
    })
}
