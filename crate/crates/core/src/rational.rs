//! Exact rational scalars and their textual forms.
//!
//! Every endpoint, index, weight, and bound in the crate is a [`Rational`].
//! The textual form is `"p/q"` in lowest terms, or `"p"` when `q = 1`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced.
///
/// # Panics
///
/// If `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// Parses `"p"` or `"p/q"` (optional leading sign on `p`, `q > 0`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let valid_digits = |x: &str, signed: bool| {
        let body = if signed {
            x.strip_prefix(['-', '+']).unwrap_or(x)
        } else {
            x
        };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_digits(num, true) {
        return Err(bad());
    }
    let n = BigInt::from_str(num).map_err(|_| bad())?;
    let d = match den {
        Some(d) => {
            if !valid_digits(d, false) {
                return Err(bad());
            }
            BigInt::from_str(d).map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

/// Lowest-terms text; `BigRational`'s `Display` already does this.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Decimal rendering with `places` digits after the point, rounding half away
/// from zero. Display only.
pub fn to_decimal(x: &Rational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = x.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + rat(1, 2)).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if x.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = places)
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `2^e` as a rational.
pub fn pow2(e: u32) -> Rational {
    Rational::from_integer(BigInt::one() << e)
}

pub fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

/// Serde adapter storing a [`Rational`] as its exact string form.
pub mod serde_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}
