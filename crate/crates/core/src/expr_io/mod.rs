//! Text and JSON input/output: the expression grammar, system and field
//! documents, and canonical JSON rendering of results.

mod parser;

use serde::Serialize;
use serde_json::{json, Map, Value};

pub use parser::{
    parse_fraction, parse_mvpoly, parse_ratfunc_in, Fraction, Grammar, MAX_EXPONENT,
    MAX_POWER_DEGREE,
};

use crate::error::{Error, Result};
use crate::exactcore::{BigRational, Matrix, QMatrix, RatFunc, RfMatrix};
use crate::galois_report::GaloisReport;
use crate::system::SystemSpec;
use crate::vfields::{maclaurin_truncate, MvPoly, VerticalField};

/// Parse a rational function of `x`.
pub fn parse_ratfunc(text: &str) -> Result<RatFunc> {
    parse_ratfunc_in(text, "x")
}

fn document(text: &str) -> Result<Map<String, Value>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    match v {
        Value::Object(m) => Ok(m),
        _ => Err(Error::Document("expected a JSON object".into())),
    }
}

fn dimension(doc: &Map<String, Value>) -> Result<usize> {
    let n = doc
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Document("\"n\" must be a positive integer".into()))?;
    if n == 0 || n > 64 {
        return Err(Error::Document("\"n\" must be between 1 and 64".into()));
    }
    Ok(n as usize)
}

fn variable(doc: &Map<String, Value>) -> Result<String> {
    match doc.get("var") {
        None => Ok("x".into()),
        Some(Value::String(s))
            if !s.is_empty()
                && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
                && !s.as_bytes()[0].is_ascii_digit()
                && !s.starts_with('y') =>
        {
            Ok(s.clone())
        }
        Some(_) => Err(Error::Document(
            "\"var\" must be an identifier not starting with 'y'".into(),
        )),
    }
}

/// Expression text of a JSON entry; bare integers are accepted as well.
fn expr_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        _ => Err(Error::Document("expected an expression string".into())),
    }
}

/// Parse `{"n": k, "A": [[expr, ..], ..], "var"?: name}`.
pub fn parse_system(text: &str) -> Result<SystemSpec> {
    let doc = document(text)?;
    let n = dimension(&doc)?;
    let var = variable(&doc)?;
    let rows = doc
        .get("A")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Document("\"A\" must be an array of rows".into()))?;
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rows.len(),
        });
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Document(format!("row {i} of \"A\" is not an array")))?;
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        for (j, v) in row.iter().enumerate() {
            let e = expr_text(v)
                .and_then(|t| parse_ratfunc_in(&t, &var))
                .map_err(|e| e.at_entry(i, j))?;
            entries.push(e);
        }
    }
    SystemSpec::with_var(Matrix::new(n, n, entries)?, var)
}

fn field_parts(text: &str, allow_fiber_denominator: bool) -> Result<(usize, Vec<Fraction>)> {
    let doc = document(text)?;
    let n = dimension(&doc)?;
    let var = variable(&doc)?;
    let comps = doc
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Document("\"components\" must be an array".into()))?;
    if comps.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: comps.len(),
        });
    }
    let grammar = Grammar {
        var: &var,
        nvars: n,
        allow_fiber_denominator,
    };
    let parts = comps
        .iter()
        .enumerate()
        .map(|(i, v)| {
            expr_text(v)
                .and_then(|t| parse_fraction(&t, &grammar))
                .map_err(|e| e.at_component(i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((n, parts))
}

/// Parse `{"n": k, "components": [expr, ..]}` into a polynomial field.
/// Denominators involving `y` are rejected.
pub fn parse_vfield(text: &str) -> Result<VerticalField> {
    let (_, parts) = field_parts(text, false)?;
    VerticalField::new(parts.into_iter().map(|f| f.num).collect())
}

/// Parse a field whose components may have denominators in `y`, bring them to a
/// common denominator and return its homogeneous Maclaurin components up to `order`.
pub fn parse_vfield_maclaurin(text: &str, order: u32) -> Result<Vec<(u32, VerticalField)>> {
    let (n, parts) = field_parts(text, true)?;
    let mut dens: Vec<MvPoly> = Vec::new();
    for f in &parts {
        if !dens.contains(&f.den) {
            dens.push(f.den.clone());
        }
    }
    let common = dens.iter().fold(MvPoly::one(n), |acc, d| acc.mul(d));
    let nums = parts
        .iter()
        .map(|f| {
            dens.iter()
                .filter(|d| **d != f.den)
                .fold(f.num.clone(), |acc, d| acc.mul(d))
        })
        .collect();
    maclaurin_truncate(&VerticalField::new(nums)?, &common, order)
}

/// Parse a constant matrix given as JSON rows of integers or rational expressions.
pub fn parse_qmatrix(text: &str) -> Result<QMatrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Document("matrix must be an array of rows".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Document(format!("row {i} is not an array")))?;
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let f = expr_text(v)
                    .and_then(|t| parse_ratfunc(&t))
                    .map_err(|e| e.at_entry(i, j))?;
                f.as_constant()
                    .ok_or_else(|| Error::NonConstantCoefficient.at_entry(i, j))
            })
            .collect::<Result<Vec<BigRational>>>()?;
        out.push(parsed);
    }
    let m = Matrix::from_rows(out)?;
    if m.rows() == 0 {
        return Err(Error::Document("empty matrix".into()));
    }
    m.ensure_square()?;
    Ok(m)
}

pub fn matrix_to_json(m: &RfMatrix, var: &str) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|e| Value::String(e.to_text(var))).collect()))
            .collect(),
    )
}

pub fn qmatrix_to_json(m: &QMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|e| Value::String(e.to_string())).collect()))
            .collect(),
    )
}

pub fn system_to_json(s: &SystemSpec) -> Value {
    json!({
        "n": s.n(),
        "var": s.var(),
        "A": matrix_to_json(s.matrix(), s.var()),
    })
}

pub fn field_to_json(f: &VerticalField, var: &str) -> Value {
    json!({
        "n": f.n(),
        "components": f.to_text(var),
    })
}

/// Pretty JSON with object keys sorted, terminated by a newline.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    // routing through `Value` sorts map keys
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Canonical JSON text of a report.
pub fn serialize_report(r: &GaloisReport) -> String {
    canonical_json(r)
}

pub fn parse_report(text: &str) -> Result<GaloisReport> {
    serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
}
