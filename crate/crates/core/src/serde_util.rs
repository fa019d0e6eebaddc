//! Serialization helpers shared by the report types.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serializer;

/// Exact rationals serialize as "num/den" (or "num" when integral).
pub fn rational_string<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest binary64 to an exact rational.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Big integers as JSON numbers when they fit in u64, decimal strings otherwise.
pub mod biguint {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match x.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&x.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(u64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v.into()),
            Repr::Str(s) => s.parse().map_err(de::Error::custom),
        }
    }

    /// Wrapper usable inside containers.
    #[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
    #[serde(transparent)]
    pub struct Big(#[serde(with = "self")] pub BigUint);
}

/// Signed big integers as decimal strings.
pub fn bigint_list<S: Serializer>(v: &[num_bigint::BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}
