//! Exact rational scalars and their string encoding.
//!
//! Every scalar in the crate is a [`Rat`]. On the wire a rational is always
//! the string `"num/den"`; parsing also accepts a bare integer.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`. The denominator must be nonzero.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
    }
}

/// Canonical `"num/den"` form, denominator always written.
pub fn fmt_rat(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses a comma separated pair such as `"1/2,3"`.
pub fn parse_rat_pair(s: &str) -> Result<(Rat, Rat)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected a pair `a,b`, got {s:?}")))?;
    Ok((parse_rat(a)?, parse_rat(b)?))
}

pub fn to_f64(q: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Lowest common multiple of the denominators.
pub fn denom_lcm<'a>(qs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn pow(q: &Rat, e: u32) -> Rat {
    num_traits::pow(q.clone(), e as usize)
}

/// `floor(x^(p/q))` for a nonnegative integer `x`, computed exactly.
pub fn floor_rational_power(x: &BigUint, p: u32, q: u32) -> BigUint {
    assert!(q > 0, "root index must be positive");
    num_traits::pow(x.clone(), p as usize).nth_root(q)
}

/// Certified bracket `lo <= sqrt(q) <= hi` with `hi - lo <= 2^-bits`, for `q >= 0`.
pub fn sqrt_bounds(q: &Rat, bits: u32) -> (Rat, Rat) {
    assert!(!q.is_negative(), "sqrt of a negative rational");
    // sqrt(n/d) = sqrt(n*d*4^bits) / (d*2^bits)
    let scale = BigInt::one() << bits;
    let radicand = q.numer() * q.denom() * &scale * &scale;
    let root = radicand.sqrt();
    let exact = &root * &root == radicand;
    let den = q.denom() * &scale;
    let lo = Rat::new(root.clone(), den.clone());
    let hi = if exact { lo.clone() } else { Rat::new(root + 1, den) };
    (lo, hi)
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(q: &Rat) -> i8 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Serializes any `Display` value (big integers) as a JSON string.
pub fn ser_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Serde adapters encoding [`Rat`] as `"num/den"` strings.
pub mod serde_rat {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let raw = RatRepr::deserialize(d)?;
        raw.into_rat().map_err(de::Error::custom)
    }

    /// Accepts either a JSON string or a JSON integer.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RatRepr {
        Str(String),
        Int(i64),
    }

    impl RatRepr {
        pub(crate) fn into_rat(self) -> Result<Rat> {
            match self {
                RatRepr::Str(s) => parse_rat(&s),
                RatRepr::Int(n) => Ok(int(n)),
            }
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(qs: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(qs.len()))?;
            for q in qs {
                seq.serialize_element(&fmt_rat(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rat>, D::Error> {
            let raw = Vec::<RatRepr>::deserialize(d)?;
            raw.into_iter()
                .map(|r| r.into_rat().map_err(de::Error::custom))
                .collect()
        }
    }

    pub mod pair {
        use super::*;
        use serde::ser::SerializeTuple;

        pub fn serialize<S: Serializer>(
            q: &(Rat, Rat),
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let mut t = s.serialize_tuple(2)?;
            t.serialize_element(&fmt_rat(&q.0))?;
            t.serialize_element(&fmt_rat(&q.1))?;
            t.end()
        }
    }
}
