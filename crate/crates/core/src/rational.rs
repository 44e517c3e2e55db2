//! Exact rational scalars and their `"p/q"` wire format.
//!
//! All exponents and coefficients in the fragment are `num::BigRational`
//! values. JSON never carries floating point: rationals are serialised as
//! strings like `"-3/4"` or `"2"`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt::Write as _;

pub type Rat = BigRational;

/// Parse errors for the `"p/q"` string form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatParseError {
    pub input: String,
    pub reason: &'static str,
}

impl std::fmt::Display for RatParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid rational {:?}: {}", self.input, self.reason)
    }
}

impl std::error::Error for RatParseError {}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Canonical string form: `p` when the denominator is 1, else `p/q` with `q > 0`.
pub fn rat_to_string(r: &Rat) -> String {
    let mut s = String::new();
    if r.denom().is_one() {
        let _ = write!(s, "{}", r.numer());
    } else {
        let _ = write!(s, "{}/{}", r.numer(), r.denom());
    }
    s
}

pub fn rat_from_str(s: &str) -> Result<Rat, RatParseError> {
    let err = |reason| RatParseError {
        input: s.to_string(),
        reason,
    };
    let s = s.trim();
    if s.is_empty() {
        return Err(err("empty string"));
    }
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| err("bad integer"))?;
            Ok(Rat::from_integer(n))
        }
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| err("bad numerator"))?;
            let q: BigInt = q.trim().parse().map_err(|_| err("bad denominator"))?;
            if q.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(Rat::new(p, q))
        }
    }
}

pub fn is_nonpositive(r: &Rat) -> bool {
    !r.is_positive()
}

/// Serde adaptor: (de)serialise a `Rat` through the canonical string form.
pub mod rat_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        rat_from_str(&s).map_err(de::Error::custom)
    }
}

/// Serde adaptor for ordered sets of rationals, as sorted `"p/q"` lists.
pub mod rat_set {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeSet;

    pub fn serialize<S: Serializer>(set: &BTreeSet<Rat>, ser: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = set.iter().map(rat_to_string).collect();
        v.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BTreeSet<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(de)?;
        v.iter()
            .map(|s| rat_from_str(s).map_err(de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        for (n, d, s) in [(1, 2, "1/2"), (-3, 4, "-3/4"), (5, 1, "5"), (0, 7, "0")] {
            let r = rat(n, d);
            assert_eq!(rat_to_string(&r), s);
            assert_eq!(rat_from_str(s).unwrap(), r);
        }
    }

    #[test]
    fn parse_rejects_junk() {
        assert!(rat_from_str("").is_err());
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("a/b").is_err());
        assert!(rat_from_str("1.5").is_err());
    }

    #[test]
    fn normalisation() {
        assert_eq!(rat_from_str("2/4").unwrap(), rat(1, 2));
        assert_eq!(rat_from_str("-2/-4").unwrap(), rat(1, 2));
    }
}
