//! Power-law degree sequences that satisfy the realization conditions.

use crate::error::{Error, Result};

use super::validate::twos_capacity;

/// Degree counts `floor(c n k^-alpha)` for `k = 1..n-1` with
/// `c = 1 / sum_k k^-alpha`, then trimmed so the degree-1 and degree-2
/// counts respect their caps; every trimmed or missing slot gets degree 3.
/// Returned sorted by decreasing degree.
pub fn powerlaw_sequence(alpha: f64, n: usize) -> Result<Vec<usize>> {
    if !alpha.is_finite() || alpha <= 2.0 {
        return Err(Error::InvalidInput(format!("power-law exponent must exceed 2, got {alpha}")));
    }
    if n < 5 {
        return Err(Error::InvalidInput(format!("need n >= 5, got {n}")));
    }
    let norm: f64 = (1..n).map(|k| (k as f64).powf(-alpha)).sum();
    let c = 1.0 / norm;
    let mut counts = vec![0usize; n];
    for (k, count) in counts.iter_mut().enumerate().skip(1) {
        *count = (c * n as f64 * (k as f64).powf(-alpha)).floor() as usize;
    }
    let mut degrees: Vec<usize> = Vec::with_capacity(n);
    for k in (4..n).rev() {
        degrees.extend(std::iter::repeat_n(k, counts[k]));
    }
    let at_least_four = degrees.len();
    let twos = counts[2].min(twos_capacity(&degrees));
    let ones = counts[1].min(at_least_four / 3);
    let threes = n.checked_sub(degrees.len() + twos + ones).ok_or_else(|| {
        Error::InvalidInput("power-law counts exceed n".into())
    })?;
    degrees.extend(std::iter::repeat_n(3, threes));
    degrees.extend(std::iter::repeat_n(2, twos));
    degrees.extend(std::iter::repeat_n(1, ones));
    Ok(degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree_sequence::validate::validate_sequence;
    use crate::rational::ratio;

    #[test]
    fn generated_sequence_is_admissible() {
        let d = powerlaw_sequence(2.5, 2000).unwrap();
        assert_eq!(d.len(), 2000);
        let diag = validate_sequence(&d, &ratio(11, 20)).unwrap();
        assert!(diag.k >= 3);
        assert!(d.contains(&1) && d.contains(&2));
    }

    #[test]
    fn rejects_light_tail_exponent() {
        assert!(powerlaw_sequence(2.0, 100).is_err());
    }
}
