//! The `tensor3/v1` JSON document.
//!
//! ```json
//! {"format":"tensor3/v1","field":"Q","dims":[2,2,2],"entries":[[0,0,0,1],[1,1,1,"1/2"]]}
//! ```
//!
//! Over GF(p) the document also carries `"modulus"`. Omitted entries are
//! zero. Emission is canonical: lowest terms, zero entries dropped, entries
//! sorted by `(i, j, k)`, integers written as JSON numbers when they fit.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::tensor::Tensor3;

pub const FORMAT_TAG: &str = "tensor3/v1";

#[derive(Serialize)]
#[serde(untagged)]
enum EntryValue {
    Int(i64),
    Text(String),
}

#[derive(Serialize)]
struct Document<'a> {
    format: &'a str,
    field: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    modulus: Option<u64>,
    dims: [usize; 3],
    entries: Vec<(usize, usize, usize, EntryValue)>,
}

fn entry_value(v: &Scalar) -> EntryValue {
    match v.to_integer().as_ref().and_then(BigInt::to_i64) {
        Some(i) => EntryValue::Int(i),
        None => EntryValue::Text(v.to_string()),
    }
}

/// Serializes a tensor as a single-line canonical document.
pub fn emit_tensor(t: &Tensor3) -> String {
    let doc = Document {
        format: FORMAT_TAG,
        field: t.field().tag(),
        modulus: t.field().modulus(),
        dims: t.dims(),
        entries: t
            .nonzero_entries()
            .into_iter()
            .map(|([i, j, k], v)| (i, j, k, entry_value(v)))
            .collect(),
    };
    serde_json::to_string(&doc).expect("document serializes")
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses a `tensor3/v1` document.
pub fn parse_tensor(text: &str) -> Result<Tensor3> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        parse_err(format!(
            "malformed JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| parse_err("document must be a JSON object"))?;
    match obj.get("format").and_then(Value::as_str) {
        Some(FORMAT_TAG) => {}
        Some(other) => return Err(parse_err(format!("unsupported format {other:?}"))),
        None => return Err(parse_err("missing \"format\"")),
    }
    let field = match obj.get("field").and_then(Value::as_str) {
        Some("Q") => {
            if obj.contains_key("modulus") {
                return Err(parse_err("\"modulus\" is only allowed with field \"gfp\""));
            }
            Field::Rational
        }
        Some("gfp") => {
            let p = obj
                .get("modulus")
                .and_then(Value::as_u64)
                .ok_or_else(|| parse_err("field \"gfp\" needs an integer \"modulus\""))?;
            Field::prime(p)?
        }
        Some(other) => return Err(parse_err(format!("unknown field {other:?}"))),
        None => return Err(parse_err("missing \"field\"")),
    };
    let dims_val = obj
        .get("dims")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing \"dims\" array"))?;
    if dims_val.len() != 3 {
        return Err(parse_err(format!(
            "\"dims\" must have 3 entries, found {}",
            dims_val.len()
        )));
    }
    let mut dims = [0usize; 3];
    for (q, d) in dims_val.iter().enumerate() {
        dims[q] = d
            .as_u64()
            .filter(|&x| x > 0)
            .ok_or_else(|| parse_err(format!("dims[{q}] must be a positive integer")))? as usize;
    }
    if dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .is_none_or(|n| n > 1 << 24)
    {
        return Err(parse_err(format!("dims {dims:?} are too large")));
    }
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing \"entries\" array"))?;
    let mut t = Tensor3::zeros(field, dims);
    let mut seen = std::collections::HashSet::new();
    for (n, e) in entries.iter().enumerate() {
        let arr = e
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| parse_err(format!("entries[{n}]: expected [i, j, k, value]")))?;
        let mut idx = [0usize; 3];
        for q in 0..3 {
            let v = arr[q]
                .as_u64()
                .ok_or_else(|| parse_err(format!("entries[{n}]: index {q} is not a natural number")))?;
            if v as usize >= dims[q] {
                return Err(parse_err(format!(
                    "entries[{n}]: entry index out of range ({v} >= {})",
                    dims[q]
                )));
            }
            idx[q] = v as usize;
        }
        if !seen.insert(idx) {
            return Err(parse_err(format!("entries[{n}]: duplicate entry {idx:?}")));
        }
        let value = match &arr[3] {
            Value::Number(num) => field.parse_scalar(&num.to_string()),
            Value::String(s) => field.parse_scalar(s),
            _ => Err(parse_err("value must be an integer or a string")),
        }
        .map_err(|e| parse_err(format!("entries[{n}]: invalid scalar literal: {e}")))?;
        t.set(idx[0], idx[1], idx[2], value);
    }
    Ok(t)
}
