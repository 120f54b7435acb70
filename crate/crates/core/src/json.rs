//! Serde helpers for the JSON wire format.
//!
//! Integers are written as JSON numbers while they fit in the 53-bit range
//! that double-based JSON readers represent exactly, and as decimal strings
//! beyond that. Readers accept either form.

use num_rational::Ratio;
use serde::de::{self, Deserializer, Visitor};
use serde::Serializer;
use serde_json::Value;
use std::fmt;

const SAFE_LIMIT: i64 = 1 << 53;

pub mod exact_i64 {
    use super::*;

    pub fn serialize<S: Serializer>(value: &i64, serializer: S) -> Result<S::Ok, S::Error> {
        if value.unsigned_abs() <= SAFE_LIMIT as u64 {
            serializer.serialize_i64(*value)
        } else {
            serializer.serialize_str(&value.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<i64, D::Error> {
        deserializer.deserialize_any(ExactI64Visitor)
    }
}

struct ExactI64Visitor;

impl<'de> Visitor<'de> for ExactI64Visitor {
    type Value = i64;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<i64, E> {
        Ok(v)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<i64, E> {
        i64::try_from(v).map_err(|_| E::custom(format!("integer {v} out of range")))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<i64, E> {
        if v.fract() == 0.0 && v.abs() <= SAFE_LIMIT as f64 {
            Ok(v as i64)
        } else {
            Err(E::custom(format!("{v} is not an exactly representable integer")))
        }
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<i64, E> {
        v.trim().parse().map_err(|_| E::custom(format!("invalid integer string {v:?}")))
    }
}

/// A rational as a JSON number when it is a safe integer, otherwise as the
/// string `"p/q"` (or `"p"` for large integers).
pub fn ratio(r: &Ratio<i128>) -> Value {
    if r.is_integer() && r.numer().unsigned_abs() <= SAFE_LIMIT as u128 {
        Value::from(*r.numer() as i64)
    } else {
        Value::String(r.to_string())
    }
}
