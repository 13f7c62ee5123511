//! Serde helpers for arbitrary-precision naturals: values that fit in a
//! `u64` are written as JSON numbers, larger ones as decimal strings.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrString {
    Num(u64),
    Str(String),
}

fn parse(v: NumOrString) -> Result<BigUint, String> {
    match v {
        NumOrString::Num(n) => Ok(BigUint::from(n)),
        NumOrString::Str(s) => s
            .parse::<BigUint>()
            .map_err(|e| format!("invalid natural {s:?}: {e}")),
    }
}

pub fn to_json(v: &BigUint) -> serde_json::Value {
    match v.to_u64() {
        Some(n) => serde_json::Value::from(n),
        None => serde_json::Value::from(v.to_string()),
    }
}

pub mod one {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        to_json(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        parse(NumOrString::deserialize(d)?).map_err(de::Error::custom)
    }
}

pub mod many {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_json).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<NumOrString>::deserialize(d)?
            .into_iter()
            .map(|v| parse(v).map_err(de::Error::custom))
            .collect()
    }
}
