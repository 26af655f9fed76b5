//! Exact rational scalars and their textual form.
//!
//! Every quantity in the crate is an exact rational with `i64` parts. All
//! denominators that occur are divisors of small multiples of `2g - 2`, so
//! overflow is not a practical concern; overflow checks stay on in tests.

use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Q = num_rational::Rational64;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn qr(num: i64, den: i64) -> Q {
    Q::new(num, den)
}

/// Renders as `p/q`, always with an explicit denominator.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `p/q`, `p`, or a finite decimal such as `-0.25`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| err())?;
        let b: i64 = b.trim().parse().map_err(|_| err())?;
        if b == 0 {
            return Err(err());
        }
        return Ok(Q::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_abs: i64 = int.trim_start_matches('-').parse().unwrap_or(0);
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| err())?;
        let v = Q::new(int_abs * den + f, den);
        return Ok(if neg { -v } else { v });
    }
    s.parse::<i64>().map(q).map_err(|_| err())
}

pub fn floor_i(x: &Q) -> i64 {
    x.floor().to_integer()
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> i64 {
    xs.into_iter().fold(1i64, |acc, x| acc.lcm(x.denom()))
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

/// Serde adapter storing a rational as a `"p/q"` string.
pub mod as_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        parse_q(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a vector of rationals.
pub mod vec_as_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        xs.iter().map(fmt_q).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|r| parse_q(r).map_err(serde::de::Error::custom))
            .collect()
    }
}
