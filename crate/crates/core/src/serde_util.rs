//! Serde adapters: big integers and rationals travel as decimal strings.

use serde::{Deserialize, Deserializer};

fn string_or_number<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    match serde_json::Value::deserialize(d)? {
        serde_json::Value::String(s) => Ok(s),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        other => Err(serde::de::Error::custom(format!("expected a number or string, got {other}"))),
    }
}

pub mod rational_str {
    use num_rational::BigRational;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::rational::format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = super::string_or_number(d)?;
        crate::rational::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = super::string_or_number(d)?;
        s.trim().parse().map_err(|_| serde::de::Error::custom(format!("not an integer: {s:?}")))
    }
}

pub mod rational_vec {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(crate::rational::format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.into_iter()
            .map(|v| {
                let s = match v {
                    serde_json::Value::String(s) => s,
                    serde_json::Value::Number(n) => n.to_string(),
                    other => return Err(serde::de::Error::custom(format!("not a number: {other}"))),
                };
                crate::rational::parse_rational(&s).map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

pub mod rational_pairs {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(v: &[(BigRational, BigRational)], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|(a, b)| [format_rational(a), format_rational(b)])
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigRational, BigRational)>, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.into_iter()
            .map(|[a, b]| {
                Ok((
                    parse_rational(&a).map_err(serde::de::Error::custom)?,
                    parse_rational(&b).map_err(serde::de::Error::custom)?,
                ))
            })
            .collect()
    }
}
