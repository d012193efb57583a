//! JSON forms: `{minpoly: [int], interval: [q, q]}` for algebraic reals and
//! fields, with `coeffs: [q]` added for field elements. Polynomial
//! coefficients are listed from the constant term upward; rationals are
//! strings `"p"` or `"p/q"`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

use super::{parse_rational, AlgebraicReal, ExactError, IntPoly, NFElement, NumberField, Rational};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("JSON syntax error: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub(crate) fn schema(path: &str, msg: impl Into<String>) -> JsonError {
    JsonError::Schema {
        path: path.to_string(),
        msg: msg.into(),
    }
}

pub fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn int_from_json(v: &Value, path: &str) -> Result<BigInt, JsonError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| schema(path, "expected an integer")),
        Value::String(s) if s.len() <= 4096 => s.trim().parse().map_err(|_| schema(path, "expected an integer")),
        _ => Err(schema(path, "expected an integer")),
    }
}

pub fn rational_to_json(q: &Rational) -> Value {
    json!(q.to_string())
}

pub fn rational_from_json(v: &Value, path: &str) -> Result<Rational, JsonError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|_| schema(path, format!("bad rational {s:?}"))),
        Value::Number(_) => Ok(Rational::from_integer(int_from_json(v, path)?)),
        _ => Err(schema(path, "expected a rational string")),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

pub(crate) fn field_of<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, JsonError> {
    v.get(key).ok_or_else(|| schema(path, format!("missing field {key:?}")))
}

pub fn poly_to_json(p: &IntPoly) -> Value {
    Value::Array(p.coeffs().iter().map(int_to_json).collect())
}

pub fn poly_from_json(v: &Value, path: &str) -> Result<IntPoly, JsonError> {
    let a = array(v, path)?;
    if a.len() > 256 {
        return Err(schema(path, "polynomial degree too large"));
    }
    let c = a
        .iter()
        .enumerate()
        .map(|(i, x)| int_from_json(x, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntPoly::new(c))
}

pub fn algebraic_to_json(x: &AlgebraicReal) -> Value {
    let (lo, hi) = x.interval();
    json!({
        "minpoly": poly_to_json(x.minpoly()),
        "interval": [rational_to_json(lo), rational_to_json(hi)],
    })
}

pub fn algebraic_from_json(v: &Value) -> Result<AlgebraicReal, JsonError> {
    let p = poly_from_json(field_of(v, "minpoly", "$")?, "$.minpoly")?;
    let iv = array(field_of(v, "interval", "$")?, "$.interval")?;
    if iv.len() != 2 {
        return Err(schema("$.interval", "expected two endpoints"));
    }
    let lo = rational_from_json(&iv[0], "$.interval[0]")?;
    let hi = rational_from_json(&iv[1], "$.interval[1]")?;
    Ok(AlgebraicReal::new(p, lo, hi)?)
}

pub fn field_to_json(k: &NumberField) -> Value {
    algebraic_to_json(k.generator())
}

pub fn field_from_json(v: &Value) -> Result<Arc<NumberField>, JsonError> {
    Ok(NumberField::new(algebraic_from_json(v)?))
}

pub fn coeffs_to_json(x: &NFElement) -> Value {
    Value::Array(x.coeffs().iter().map(rational_to_json).collect())
}

pub fn coeffs_from_json(k: &Arc<NumberField>, v: &Value, path: &str) -> Result<NFElement, JsonError> {
    let a = array(v, path)?;
    if a.len() > k.degree() {
        return Err(schema(path, format!("expected at most {} coefficients", k.degree())));
    }
    let c = a
        .iter()
        .enumerate()
        .map(|(i, x)| rational_from_json(x, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NFElement::from_coeffs(k, c))
}

pub fn element_to_json(x: &NFElement) -> Value {
    let mut v = field_to_json(x.field());
    v["coeffs"] = coeffs_to_json(x);
    v
}

pub fn element_from_json(v: &Value) -> Result<NFElement, JsonError> {
    let k = field_from_json(v)?;
    coeffs_from_json(&k, field_of(v, "coeffs", "$")?, "$.coeffs")
}

pub fn element_from_str(s: &str) -> Result<NFElement, JsonError> {
    element_from_json(&serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let k = NumberField::new(AlgebraicReal::real_roots(&IntPoly::from_i64(&[1, -3, 1]))[1].clone());
        let x = NFElement::from_coeffs(&k, vec![Rational::new(1.into(), 3.into()), Rational::from_integer((-2).into())]);
        let j = element_to_json(&x);
        let y = element_from_json(&j).unwrap();
        assert_eq!(x.coeffs(), y.coeffs());
        assert_eq!(x.field().generator(), y.field().generator());
    }

    #[test]
    fn rejects() {
        assert!(element_from_str("{").is_err());
        assert!(element_from_str(r#"{"minpoly":[-2,0,1],"interval":["-2","2"],"coeffs":[]}"#).is_err());
        assert!(element_from_str(r#"{"minpoly":[1,-2,1],"interval":["0","2"],"coeffs":[]}"#).is_err());
        assert!(element_from_str(r#"{"minpoly":[-2,0,1],"interval":["1","2"],"coeffs":["1","2","3"]}"#).is_err());
    }
}
