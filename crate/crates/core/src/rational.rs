//! Exact rational numbers and their canonical text form.
//!
//! Every threshold comparison in the crate goes through [`Rational`]; the
//! canonical string form is always `numerator/denominator` (for example
//! `"1/1"`, `"-3/4"`), and parsing accepts that form or a bare integer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn from_usize(value: usize) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Canonical `p/q` rendering (denominator always present, always positive).
pub fn format(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `p/q` or `p`; no decimals, no exponents, no zero denominator.
pub fn parse(text: &str) -> Result<Rational> {
    let bad = |message: &str| Error::Parse {
        location: format!("rational {text:?}"),
        message: message.to_string(),
    };
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let valid = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) {
        return Err(bad("expected an integer or numerator/denominator"));
    }
    let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Floor of a rational as a signed integer; `None` if it does not fit.
pub fn floor_i64(value: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    value.floor().to_integer().to_i64()
}

pub fn ceil_i64(value: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    value.ceil().to_integer().to_i64()
}

pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn is_positive(value: &Rational) -> bool {
    value.is_positive()
}

/// Exact conversion of a finite `f64` (used only for user-facing grids).
pub fn from_f64_exact(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

pub fn max_of<'a, I>(values: I) -> Rational
where
    I: IntoIterator<Item = &'a Rational>,
{
    values
        .into_iter()
        .fold(Rational::zero(), |acc, v| if *v > acc { v.clone() } else { acc })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse("2/6").unwrap(), ratio(1, 3));
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse("-3/4").unwrap(), ratio(-3, 4));
        assert_eq!(parse(" 5 / 10 ").unwrap(), ratio(1, 2));
    }

    #[test]
    fn parse_rejects() {
        for text in ["1/0", "0.5", "1e3", "", "/", "a/b", "1/2/3", "--1"] {
            assert!(parse(text).is_err(), "{text} should fail");
        }
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(format(&ratio(2, 4)), "1/2");
        assert_eq!(format(&int(1)), "1/1");
        assert_eq!(format(&ratio(3, -9)), "-1/3");
    }
}
