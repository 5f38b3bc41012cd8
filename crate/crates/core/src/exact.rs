//! Exact rational arithmetic helpers and the `"p/q"` string encoding used by
//! every JSON document in this crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational {text:?}: expected \"p\" or \"p/q\" with q != 0")]
pub struct ParseRationalError {
    pub text: String,
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError { text: text.to_string() };
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text: `"p"` for integers, `"p/q"` (q > 0, reduced) otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn ceil(value: &Rational) -> BigInt {
    value.ceil().to_integer()
}

pub fn floor(value: &Rational) -> BigInt {
    value.floor().to_integer()
}

/// gcd of two integers, always nonnegative.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Least common multiple of the absolute values; `lcm([]) = 1`.
pub fn lcm_i64(values: impl IntoIterator<Item = i64>) -> Option<i64> {
    let mut acc: i64 = 1;
    for v in values {
        let v = v.checked_abs()?;
        if v == 0 {
            return Some(0);
        }
        acc = (acc / acc.gcd(&v)).checked_mul(v)?;
    }
    Some(acc)
}

pub fn is_one(value: &BigInt) -> bool {
    value.abs().is_one()
}

/// Serde adapter for `Rational` fields stored as strings.
pub mod as_string {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
