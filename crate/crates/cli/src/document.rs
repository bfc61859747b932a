//! JSON interchange format for a single representation.
//!
//! ```json
//! {
//!   "dims": {"r": 1, "c": 3, "cp": 1},
//!   "field": "exact",
//!   "A": [[{"re": "0", "im": "0"}, ...], ...],
//!   ...
//! }
//! ```
//!
//! Exact entries are `{"re": "p/q", "im": "p/q"}`, float entries `[re, im]`.
//! Every matrix is a row-major nested array. Unknown keys are rejected.

use std::path::Path;

use adhm_core::numkernel::scalar::{format_fraction, parse_fraction};
use adhm_core::rep::ARROW_NAMES;
use adhm_core::{DimVector, EnhancedRep, Exact, Float, Matrix, Scalar};
use num_rational::BigRational;
use serde_json::{Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

fn field_error(path: &str, message: impl Into<String>) -> DocError {
    DocError::Field {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Scalars with a JSON encoding.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value, path: &str) -> Result<Self, DocError>;
}

impl JsonScalar for Exact {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("re".into(), Value::String(format_fraction(&self.re)));
        m.insert("im".into(), Value::String(format_fraction(&self.im)));
        Value::Object(m)
    }

    fn from_json(v: &Value, path: &str) -> Result<Self, DocError> {
        let obj = v
            .as_object()
            .ok_or_else(|| field_error(path, "exact entry must be {\"re\": \"p/q\", \"im\": \"p/q\"}"))?;
        reject_unknown(obj, &["re", "im"], path)?;
        let part = |key: &str| -> Result<BigRational, DocError> {
            let p = format!("{path}.{key}");
            let s = obj
                .get(key)
                .ok_or_else(|| field_error(&p, "missing"))?
                .as_str()
                .ok_or_else(|| field_error(&p, "fraction must be a string"))?;
            parse_fraction(s).ok_or_else(|| field_error(&p, format!("invalid fraction {s:?}")))
        };
        Ok(Exact::new(part("re")?, part("im")?))
    }
}

impl JsonScalar for Float {
    fn to_json(&self) -> Value {
        Value::Array(vec![self.re.into(), self.im.into()])
    }

    fn from_json(v: &Value, path: &str) -> Result<Self, DocError> {
        let pair = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| field_error(path, "float entry must be [re, im]"))?;
        let part = |k: usize| {
            pair[k]
                .as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| field_error(&format!("{path}[{k}]"), "expected a finite number"))
        };
        Ok(Float::new(part(0)?, part(1)?))
    }
}

/// A parsed document in whichever realization it declares.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyRep {
    Exact(EnhancedRep<Exact>),
    Float(EnhancedRep<Float>),
}

impl AnyRep {
    pub fn dims(&self) -> DimVector {
        match self {
            AnyRep::Exact(x) => x.dims,
            AnyRep::Float(x) => x.dims,
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            AnyRep::Exact(x) => to_json(x),
            AnyRep::Float(x) => to_json(x),
        }
    }
}

const TOP_KEYS: [&str; 9] = ["dims", "field", "A", "B", "I", "J", "Ap", "Bp", "F"];

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<(), DocError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            let at = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
            return Err(field_error(&at, "unknown key"));
        }
    }
    Ok(())
}

fn dims_from_json(v: &Value) -> Result<DimVector, DocError> {
    let obj = v.as_object().ok_or_else(|| field_error("dims", "expected {\"r\", \"c\", \"cp\"}"))?;
    reject_unknown(obj, &["r", "c", "cp"], "dims")?;
    let get = |k: &str| {
        let p = format!("dims.{k}");
        obj.get(k)
            .ok_or_else(|| field_error(&p, "missing"))?
            .as_u64()
            .map(|n| n as usize)
            .ok_or_else(|| field_error(&p, "expected a non-negative integer"))
    };
    DimVector::new(get("r")?, get("c")?, get("cp")?).map_err(|e| field_error("dims", e.to_string()))
}

fn matrix_from_json<S: JsonScalar>(v: &Value, name: &str, shape: (usize, usize)) -> Result<Matrix<S>, DocError> {
    let (rows, cols) = shape;
    let outer = v
        .as_array()
        .ok_or_else(|| field_error(name, "expected a nested array of rows"))?;
    if outer.len() != rows {
        return Err(field_error(name, format!("expected {rows} rows, found {}", outer.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (r, row) in outer.iter().enumerate() {
        let p = format!("{name}[{r}]");
        let row = row.as_array().ok_or_else(|| field_error(&p, "expected an array"))?;
        if row.len() != cols {
            return Err(field_error(&p, format!("expected {cols} entries, found {}", row.len())));
        }
        for (c, e) in row.iter().enumerate() {
            data.push(S::from_json(e, &format!("{name}[{r}][{c}]"))?);
        }
    }
    Matrix::from_vec(rows, cols, data).map_err(|e| field_error(name, e.to_string()))
}

fn rep_from_json<S: JsonScalar>(obj: &Map<String, Value>, dims: DimVector) -> Result<EnhancedRep<S>, DocError> {
    let mut ms = Vec::with_capacity(7);
    for (name, shape) in ARROW_NAMES.iter().zip(dims.arrow_shapes()) {
        let v = obj.get(*name).ok_or_else(|| field_error(name, "missing"))?;
        ms.push(matrix_from_json::<S>(v, name, shape)?);
    }
    let [a, b, i, j, ap, bp, f]: [Matrix<S>; 7] = ms.try_into().expect("seven arrows");
    EnhancedRep::new(dims, a, b, i, j, ap, bp, f).map_err(|e| field_error("dims", e.to_string()))
}

pub fn parse(text: &str) -> Result<AnyRep, DocError> {
    let v: Value = serde_json::from_str(text).map_err(|e| DocError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = v
        .as_object()
        .ok_or_else(|| field_error("$", "document must be a JSON object"))?;
    if obj.contains_key("G") {
        return Err(field_error("G", "the gamma arrow is not supported; remove the G key"));
    }
    reject_unknown(obj, &TOP_KEYS, "")?;
    let dims = dims_from_json(obj.get("dims").ok_or_else(|| field_error("dims", "missing"))?)?;
    match obj.get("field").and_then(Value::as_str) {
        Some("exact") => Ok(AnyRep::Exact(rep_from_json(obj, dims)?)),
        Some("float") => Ok(AnyRep::Float(rep_from_json(obj, dims)?)),
        Some(other) => Err(field_error("field", format!("expected \"exact\" or \"float\", found {other:?}"))),
        None => Err(field_error("field", "missing or not a string")),
    }
}

pub fn load(path: &Path) -> Result<AnyRep, DocError> {
    let text = std::fs::read_to_string(path).map_err(|source| DocError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

fn matrix_to_json<S: JsonScalar>(m: &Matrix<S>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(JsonScalar::to_json).collect()))
            .collect(),
    )
}

/// Canonical pretty-printed document with a trailing newline. Keys are
/// sorted, fractions reduced, so equal representations give equal bytes.
pub fn to_json<S: JsonScalar>(x: &EnhancedRep<S>) -> String {
    let mut obj = Map::new();
    let mut dims = Map::new();
    dims.insert("r".into(), x.dims.r.into());
    dims.insert("c".into(), x.dims.c.into());
    dims.insert("cp".into(), x.dims.cp.into());
    obj.insert("dims".into(), Value::Object(dims));
    obj.insert("field".into(), S::NAME.into());
    for (name, m) in ARROW_NAMES.iter().zip(x.arrows()) {
        obj.insert((*name).into(), matrix_to_json(m));
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use adhm_core::normalform::{build_case, CaseKind, CaseLabel, CaseParams, DiagonalParams};

    fn x0() -> EnhancedRep<Exact> {
        let e = Exact::from_i64;
        build_case(
            CaseLabel::new(CaseKind::I),
            &CaseParams::I(DiagonalParams::n131(e(0), e(1), e(2), e(0), e(1), e(2), e(1), e(1))),
        )
        .unwrap()
    }

    #[test]
    fn exact_round_trip_is_byte_identical() {
        let text = to_json(&x0());
        let back = parse(&text).unwrap();
        assert_eq!(back, AnyRep::Exact(x0()));
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn float_round_trip_is_byte_identical() {
        let mut x = x0().convert::<Float>();
        x.a[(1, 1)] = Float::new(0.1, -1e-300);
        let text = to_json(&x);
        assert_eq!(parse(&text).unwrap().to_json(), text);
    }

    #[test]
    fn bad_fraction_names_the_field() {
        let text = to_json(&x0()).replacen("\"1\"", "\"1/0\"", 1);
        let err = parse(&text).unwrap_err().to_string();
        assert!(err.contains("1/0"), "{err}");
        assert!(err.contains("].re") || err.contains("].im"), "{err}");
    }

    #[test]
    fn unknown_and_gamma_keys_rejected() {
        let mut v: Value = serde_json::from_str(&to_json(&x0())).unwrap();
        v["G"] = Value::Array(vec![]);
        let err = parse(&v.to_string()).unwrap_err().to_string();
        assert!(err.starts_with("G:"), "{err}");
        let mut v: Value = serde_json::from_str(&to_json(&x0())).unwrap();
        v["extra"] = 1.into();
        assert!(parse(&v.to_string()).unwrap_err().to_string().contains("unknown key"));
    }

    #[test]
    fn mixed_entries_rejected() {
        let mut v: Value = serde_json::from_str(&to_json(&x0())).unwrap();
        v["F"][0][0] = serde_json::json!([1.0, 0.0]);
        let err = parse(&v.to_string()).unwrap_err().to_string();
        assert!(err.starts_with("F[0][0]"), "{err}");
    }

    #[test]
    fn shape_mismatch_rejected() {
        let mut v: Value = serde_json::from_str(&to_json(&x0())).unwrap();
        v["I"].as_array_mut().unwrap().pop();
        assert!(parse(&v.to_string()).unwrap_err().to_string().starts_with("I:"));
    }
}
