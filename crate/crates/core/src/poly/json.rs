//! JSON form: `{"num_vars": n, "terms": [{"coeff": "-5", "exp": [682, 0]}]}`.
//!
//! Coefficients are decimal strings. Exponents are emitted as JSON numbers
//! when they fit in `u64` and as decimal strings otherwise; both are accepted
//! on input.

use num_bigint::{BigInt, BigUint};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use super::SparsePoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyJsonError {
    #[error("missing or invalid field `{0}`")]
    Field(&'static str),
    #[error("term {term}: bad coefficient {value}")]
    Coeff { term: usize, value: String },
    #[error("term {term}: bad exponent {value}")]
    Exponent { term: usize, value: String },
    #[error("term {term}: expected {expected} exponents, got {got}")]
    Arity { term: usize, expected: usize, got: usize },
}

fn exponent_value(e: &BigUint) -> Value {
    match u64::try_from(e) {
        Ok(v) => json!(v),
        Err(_) => json!(e.to_string()),
    }
}

fn parse_exponent(v: &Value) -> Option<BigUint> {
    match v {
        Value::Number(n) => n.as_u64().map(BigUint::from),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

impl SparsePoly {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                json!({
                    "coeff": c.to_string(),
                    "exp": e.iter().map(exponent_value).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "num_vars": self.num_vars, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<SparsePoly, PolyJsonError> {
        let num_vars = v
            .get("num_vars")
            .and_then(Value::as_u64)
            .ok_or(PolyJsonError::Field("num_vars"))? as usize;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or(PolyJsonError::Field("terms"))?;
        let mut out = Vec::with_capacity(terms.len());
        for (k, t) in terms.iter().enumerate() {
            let coeff: BigInt = match t.get("coeff") {
                Some(Value::String(s)) => s.trim().parse().ok(),
                Some(Value::Number(n)) => n.as_i64().map(BigInt::from),
                _ => None,
            }
            .ok_or_else(|| PolyJsonError::Coeff {
                term: k,
                value: t.get("coeff").map(Value::to_string).unwrap_or_default(),
            })?;
            let exps = t
                .get("exp")
                .and_then(Value::as_array)
                .ok_or(PolyJsonError::Field("exp"))?;
            if exps.len() != num_vars {
                return Err(PolyJsonError::Arity { term: k, expected: num_vars, got: exps.len() });
            }
            let exp = exps
                .iter()
                .map(|e| {
                    parse_exponent(e)
                        .ok_or_else(|| PolyJsonError::Exponent { term: k, value: e.to_string() })
                })
                .collect::<Result<Vec<_>, _>>()?;
            out.push((exp, coeff));
        }
        Ok(SparsePoly::from_terms(num_vars, out))
    }
}

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        SparsePoly::from_json(&v).map_err(D::Error::custom)
    }
}
