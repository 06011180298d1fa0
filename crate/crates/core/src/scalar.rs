//! Scalar abstraction shared by every payoff-carrying structure.
//!
//! Certificates are always checked with [`Rational`] (arbitrary precision,
//! exact). The float instances exist for quick exploratory evaluation and are
//! never used to back a yes/no answer.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for all verification.
pub type Rational = BigRational;

pub trait Scalar: Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// `true` when arithmetic is exact and comparisons are decisive.
    const EXACT: bool;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Conversion from an exact rational; lossy for floating point.
    fn from_rational(r: &Rational) -> Self;

    /// Absolute slack used when validating that probabilities sum to one.
    fn sum_tolerance() -> Self {
        Self::zero()
    }

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Rational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn sum_tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f32 / denom as f32
    }

    fn from_rational(r: &Rational) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }

    fn sum_tolerance() -> Self {
        1e-5
    }
}

/// Shorthand for an exact rational `numer/denom`.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::from_ratio(numer, denom)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q`, an integer, or a decimal literal (`-0.125`, `3.`, `.5`,
/// optionally with an exponent) into an exact rational.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let s = token.trim();
    if s.is_empty() {
        return Err(Error::Validation("empty rational literal".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::Validation(format!("bad numerator in {token:?}")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::Validation(format!("bad denominator in {token:?}")))?;
        if d.is_zero() {
            return Err(Error::Validation(format!("zero denominator in {token:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    parse_decimal(s).ok_or_else(|| Error::Validation(format!("not a rational: {token:?}")))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str_radix(&joined, 10).ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_f64(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational("0.124").unwrap(), ratio(31, 250));
        assert_eq!(parse_rational("-.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("1.25e-1").unwrap(), ratio(1, 8));
        assert_eq!(parse_rational("2E2").unwrap(), int(200));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "abc", "1.2.3", "-", ".", "1/x"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&int(-7)), "-7");
        assert_eq!(parse_rational(&format_rational(&ratio(-5, 12))).unwrap(), ratio(-5, 12));
    }
}
