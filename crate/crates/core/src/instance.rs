//! Instance files: `{"system": [[poly, ...], ...], "orders": [...]}` with
//! optional `"dbars"` (rows of a subtorus presentation) and `"num_vars"`.
//!
//! Each inner list of `system` is one product of factors. Polynomials are
//! either text (`"x^3 - 1"`) or the JSON term form. Integers may be JSON
//! numbers or decimal strings. Without `num_vars` the variable count is the
//! largest of the order count, the width of `dbars`, and the highest variable
//! index used in text polynomials.

use num_bigint::{BigInt, BigUint};
use serde_json::Value;
use thiserror::Error;

use crate::poly::{ParseError, PolyJsonError, SparsePoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("missing or invalid field `{0}`")]
    Field(&'static str),
    #[error("{field}[{index}]: not an integer")]
    Integer { field: &'static str, index: usize },
    #[error("system[{product}][{factor}]: {source}")]
    Text { product: usize, factor: usize, source: ParseError },
    #[error("system[{product}][{factor}]: {source}")]
    PolyJson { product: usize, factor: usize, source: PolyJsonError },
    #[error("system[{product}][{factor}] has {got} variables, expected {expected}")]
    Arity { product: usize, factor: usize, expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub num_vars: usize,
    pub system: Vec<Vec<SparsePoly>>,
    pub orders: Vec<BigUint>,
    pub dbars: Option<Vec<Vec<BigInt>>>,
}

fn int<T: std::str::FromStr>(v: &Value) -> Option<T> {
    match v {
        Value::Number(n) => n.to_string().parse().ok(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

fn int_list<T: std::str::FromStr>(v: &Value, field: &'static str) -> Result<Vec<T>, InstanceError> {
    v.as_array()
        .ok_or(InstanceError::Field(field))?
        .iter()
        .enumerate()
        .map(|(index, x)| int(x).ok_or(InstanceError::Integer { field, index }))
        .collect()
}

impl Instance {
    pub fn parse(text: &str) -> Result<Instance, InstanceError> {
        let v: Value = serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Instance, InstanceError> {
        let raw = v.get("system").and_then(Value::as_array).ok_or(InstanceError::Field("system"))?;
        let mut products = Vec::with_capacity(raw.len());
        for p in raw {
            // a bare polynomial is a product with one factor
            let factors = match p {
                Value::Array(fs) => fs.clone(),
                other => vec![other.clone()],
            };
            products.push(factors);
        }
        let orders: Vec<BigUint> = match v.get("orders") {
            Some(o) => int_list(o, "orders")?,
            None => Vec::new(),
        };
        let dbars = match v.get("dbars") {
            Some(rows) => Some(
                rows.as_array()
                    .ok_or(InstanceError::Field("dbars"))?
                    .iter()
                    .map(|r| int_list(r, "dbars"))
                    .collect::<Result<Vec<Vec<BigInt>>, _>>()?,
            ),
            None => None,
        };
        let num_vars = match v.get("num_vars") {
            Some(n) => n.as_u64().ok_or(InstanceError::Field("num_vars"))? as usize,
            None => {
                let text_vars = products
                    .iter()
                    .flatten()
                    .map(|f| match f {
                        Value::String(s) => SparsePoly::max_var_index(s),
                        _ => f.get("num_vars").and_then(Value::as_u64).unwrap_or(0) as usize,
                    })
                    .max()
                    .unwrap_or(0);
                let dbar_vars = dbars.iter().flatten().map(Vec::len).max().unwrap_or(0);
                text_vars.max(orders.len()).max(dbar_vars).max(1)
            }
        };
        let system = products
            .iter()
            .enumerate()
            .map(|(i, fs)| {
                fs.iter()
                    .enumerate()
                    .map(|(j, f)| parse_poly(f, num_vars, i, j))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Instance { num_vars, system, orders, dbars })
    }

    /// All factors of all products, in order.
    pub fn flat_system(&self) -> Vec<SparsePoly> {
        self.system.iter().flatten().cloned().collect()
    }
}

fn parse_poly(v: &Value, num_vars: usize, product: usize, factor: usize) -> Result<SparsePoly, InstanceError> {
    let f = match v {
        Value::String(s) => {
            SparsePoly::parse(s, num_vars).map_err(|source| InstanceError::Text { product, factor, source })?
        }
        _ => SparsePoly::from_json(v).map_err(|source| InstanceError::PolyJson { product, factor, source })?,
    };
    if f.num_vars() != num_vars {
        return Err(InstanceError::Arity { product, factor, expected: num_vars, got: f.num_vars() });
    }
    Ok(f)
}
