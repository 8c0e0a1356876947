//! Exact rational scalars and their `"p/q"` text form.

use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// All distances and thresholds share this exact scalar type.
pub type Rational = Ratio<i64>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

/// Parses `"p/q"` or a bare integer `"p"`. `i64::MIN` is rejected in either
/// position since reducing it can overflow.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = |why: &str| Error::Parse(format!("bad rational {text:?}: {why}"));
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p, q),
        None => (text, "1"),
    };
    let p = i64::from_str(p).map_err(|e| bad(&e.to_string()))?;
    let q = i64::from_str(q).map_err(|e| bad(&e.to_string()))?;
    if q == 0 {
        return Err(bad("zero denominator"));
    }
    if p == i64::MIN || q == i64::MIN {
        return Err(bad("out of range"));
    }
    Ok(Rational::new(p, q))
}

/// Parses a rational that must be non-negative (a scale).
pub fn parse_scale(text: &str) -> Result<Rational> {
    let r = parse(text)?;
    if r.is_negative() {
        return Err(Error::NegativeScale(r));
    }
    Ok(r)
}

/// Parses a comma-separated list of scales, sorted and deduplicated.
pub fn parse_list(text: &str) -> Result<Vec<Rational>> {
    let mut list = text.split(',').map(parse_scale).collect::<Result<Vec<_>>>()?;
    list.sort();
    list.dedup();
    Ok(list)
}

/// Always `"p/q"`, reduced, with `q > 0`; integers print as `"p/1"`.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn format_opt(r: Option<&Rational>) -> String {
    r.map(format).unwrap_or_else(|| "none".to_string())
}

/// Serde adapter storing a rational as a `"p/q"` string.
pub mod serde_pq {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Largest element of the sorted slice that is `<= bound`.
pub fn floor_in(sorted: &[Rational], bound: &Rational) -> Option<Rational> {
    let idx = sorted.partition_point(|c| c <= bound);
    idx.checked_sub(1).map(|i| sorted[i])
}

/// Smallest element of the sorted slice that is strictly greater than `bound`.
pub fn next_above(sorted: &[Rational], bound: &Rational) -> Option<Rational> {
    let idx = sorted.partition_point(|c| c <= bound);
    sorted.get(idx).copied()
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}
