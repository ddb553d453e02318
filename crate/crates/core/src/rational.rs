//! Exact rational numbers and their canonical `num/den` text form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for building small constants.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Renders `value` as `num/den` in lowest terms; the denominator is always
/// printed, so `1` becomes `1/1`.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Human-oriented rendering: integers drop the `/1`.
pub fn display_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format_rational(value)
    }
}

/// Parses a rational from `num/den` or a bare integer.
///
/// Decimal notation is rejected, as are zero or negative denominators and
/// fractions that are not in lowest terms.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let fail = |reason: &str| Error::Rational {
        value: text.to_string(),
        reason: reason.to_string(),
    };
    let text_trim = text.trim();
    if text_trim.contains(['.', 'e', 'E']) {
        return Err(fail("decimal notation is not accepted; use num/den"));
    }
    let (numer, denom) = match text_trim.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text_trim, "1"),
    };
    let parse_int = |s: &str| -> Result<BigInt> {
        let s = s.strip_prefix('+').unwrap_or(s);
        if s.is_empty() || !s.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()) {
            return Err(fail("expected an integer numerator and denominator"));
        }
        s.parse::<BigInt>()
            .map_err(|_| fail("expected an integer numerator and denominator"))
    };
    let numer = parse_int(numer)?;
    let denom = parse_int(denom)?;
    if denom.is_zero() {
        return Err(fail("zero denominator"));
    }
    if denom.is_negative() {
        return Err(fail("denominator must be positive"));
    }
    if !numer.gcd(&denom).is_one() && !(numer.is_zero() && denom.is_one()) {
        return Err(fail("fraction is not in lowest terms"));
    }
    Ok(Rational::new_raw(numer, denom))
}

pub(crate) fn in_unit_interval(value: &Rational) -> bool {
    !value.is_negative() && value <= &Rational::one()
}
