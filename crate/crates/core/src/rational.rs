//! Exact rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Renders in lowest terms: `"p/q"`, or just `"p"` when the denominator is 1.
pub fn to_string(value: &Rational) -> String {
    value.to_string()
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse(text: &str) -> Result<Rational> {
    let bad = || Error::Domain(format!("not a rational number: {text:?}"));
    let (numer, denom) = match text.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = denom.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Integer floor of a rational.
pub fn floor(value: &Rational) -> BigInt {
    value.floor().to_integer()
}

pub fn is_integer(value: &Rational) -> bool {
    value.denom().is_one()
}

/// Serde adapter storing a rational as its `"p/q"` string.
pub mod as_string {
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_string(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(de::Error::custom)
    }
}

/// Same as [`as_string`] for optional values; `None` is written as `null`.
pub mod as_option_string {
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_str(&super::to_string(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| super::parse(&t).map_err(de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_lowest_terms() {
        assert_eq!(to_string(&ratio(2, 8)), "1/4");
        assert_eq!(to_string(&ratio(6, 1)), "6");
        assert_eq!(to_string(&ratio(-3, 9)), "-1/3");
    }

    #[test]
    fn parses_forms() {
        assert_eq!(parse("1/4").unwrap(), ratio(1, 4));
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse("-2/6").unwrap(), ratio(-1, 3));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }
}
