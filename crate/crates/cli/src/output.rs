//! Number formatting shared by the JSON and CSV writers: integral values
//! print as integers, everything else in the shortest form that parses back
//! to the same `f64`.

use serde_json::{Number, Value};

use crate::Failure;

const EXACT_INT: f64 = 9_007_199_254_740_992.0;

pub fn json_number(v: f64) -> Result<Value, Failure> {
    if !v.is_finite() {
        return Err(Failure(format!("non-finite result {v}")));
    }
    if v.fract() == 0.0 && v.abs() < EXACT_INT {
        return Ok(Value::Number(Number::from(v as i64)));
    }
    Ok(Value::Number(Number::from_f64(v).expect("finite")))
}

pub fn json_numbers(v: &[f64]) -> Result<Value, Failure> {
    Ok(Value::Array(v.iter().map(|&x| json_number(x)).collect::<Result<_, _>>()?))
}

/// Rewrites integral floats anywhere in `v` as integers.
pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() && x.fract() == 0.0 && x.abs() < EXACT_INT => Value::Number(Number::from(x as i64)),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

pub fn csv_number(v: f64) -> Result<String, Failure> {
    Ok(json_number(v)?.to_string())
}
