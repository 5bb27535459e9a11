//! JSON encodings shared by fixtures and the command-line front end.
//!
//! Integers are written as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise. Rationals are always strings, `"p/q"` or `"p"`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::{IntMatrix, RatMatrix};
use crate::periods::PeriodVector;

pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => Value::String(x.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        other => Err(Error::Parse(format!("expected integer, found {other}"))),
    }
}

pub fn rat_to_json(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn rat_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(_) => int_from_json(v).map(BigRational::from_integer),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("expected rational string, found {other}"))),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| bad()),
    }
}

pub fn int_matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array(m.iter_rows().map(|r| Value::Array(r.iter().map(int_to_json).collect())).collect())
}

/// Parses `[[int]]`. `cols` fixes the width of an empty matrix.
pub fn int_matrix_from_json(v: &Value, cols: Option<usize>) -> Result<IntMatrix> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
    let parsed = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse("expected a row array".into()))?
                .iter()
                .map(int_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if parsed.is_empty() {
        return Ok(IntMatrix::zeros(0, cols.unwrap_or(0)));
    }
    IntMatrix::from_rows(&parsed)
}

pub fn rat_vec_to_json(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

pub fn rat_vec_from_json(v: &Value) -> Result<Vec<BigRational>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected an array of rationals".into()))?
        .iter()
        .map(rat_from_json)
        .collect()
}

pub fn rat_matrix_to_json(m: &RatMatrix) -> Value {
    Value::Array(m.iter_rows().map(rat_vec_to_json).collect())
}

/// `{"label": string?, "gram": [[int]]}`
pub fn lattice_to_json(l: &Lattice) -> Value {
    let mut obj = serde_json::Map::new();
    if let Some(label) = l.label() {
        obj.insert("label".into(), Value::String(label.to_string()));
    }
    obj.insert("gram".into(), int_matrix_to_json(l.gram()));
    Value::Object(obj)
}

pub fn lattice_from_json(v: &Value) -> Result<Lattice> {
    let gram = v.get("gram").ok_or_else(|| Error::Parse("lattice object needs \"gram\"".into()))?;
    let gram = int_matrix_from_json(gram, None)?;
    let lattice = Lattice::new(gram)?;
    match v.get("label") {
        None | Some(Value::Null) => Ok(lattice),
        Some(Value::String(s)) => Ok(lattice.with_label(s.clone())),
        Some(other) => Err(Error::Parse(format!("label must be a string, found {other}"))),
    }
}

/// `{"lattice": <lattice>, "D": int, "re": [rat], "im": [rat]}`
pub fn period_to_json(p: &PeriodVector) -> Value {
    json!({
        "lattice": lattice_to_json(p.lattice()),
        "D": int_to_json(p.field()),
        "re": rat_vec_to_json(p.re()),
        "im": rat_vec_to_json(p.im()),
    })
}

pub fn period_from_json(v: &Value) -> Result<PeriodVector> {
    let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("period object needs \"{k}\"")));
    PeriodVector::new(
        lattice_from_json(field("lattice")?)?,
        int_from_json(field("D")?)?,
        rat_vec_from_json(field("re")?)?,
        rat_vec_from_json(field("im")?)?,
    )
}
