//! JSON file formats for frames and fusion frames.
//!
//! Frames: `{"dim": N, "field": "real"|"complex", "vectors": [[column], ...]}`.
//! Fusion frames: `{"ambient_dim": N, "field": ..., "subspaces": [{"basis": [[column], ...],
//! "weight": w, "source_indices": [...]}]}`. Complex entries are `[re, im]` pairs.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::fusion::{FusionFrame, Subspace};
use crate::numerics::{Field, Matrix, Scalar, Tolerances};

/// A frame over whichever field its file declared.
#[derive(Debug, Clone)]
pub enum AnyFrame {
    Real(Frame<f64>),
    Complex(Frame<Complex64>),
}

impl AnyFrame {
    pub fn field(&self) -> Field {
        match self {
            AnyFrame::Real(_) => Field::Real,
            AnyFrame::Complex(_) => Field::Complex,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyFrame::Real(f) => frame_to_json(f),
            AnyFrame::Complex(f) => frame_to_json(f),
        }
    }
}

impl From<Frame<f64>> for AnyFrame {
    fn from(f: Frame<f64>) -> Self {
        AnyFrame::Real(f)
    }
}

impl From<Frame<Complex64>> for AnyFrame {
    fn from(f: Frame<Complex64>) -> Self {
        AnyFrame::Complex(f)
    }
}

/// Frame or fusion frame over either field.
#[derive(Debug, Clone)]
pub enum AnyFusionFrame {
    Real(FusionFrame<f64>),
    Complex(FusionFrame<Complex64>),
}

fn entry_to_json<S: Scalar>(x: S) -> Value {
    match S::FIELD {
        Field::Real => json!(x.re()),
        Field::Complex => json!([x.re(), x.im()]),
    }
}

fn columns_to_json<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array(
        m.columns()
            .map(|c| Value::Array(c.iter().map(|&x| entry_to_json(x)).collect()))
            .collect(),
    )
}

pub fn frame_to_json<S: Scalar>(f: &Frame<S>) -> Value {
    json!({
        "dim": f.dim(),
        "field": S::FIELD,
        "vectors": columns_to_json(f.vectors()),
    })
}

pub fn fusion_to_json<S: Scalar>(ff: &FusionFrame<S>) -> Value {
    let subspaces: Vec<Value> = ff
        .subspaces()
        .iter()
        .zip(ff.weights())
        .map(|(s, &w)| {
            let mut m = Map::new();
            m.insert("basis".into(), columns_to_json(s.basis()));
            m.insert("weight".into(), json!(w));
            if let Some(idx) = s.source_indices() {
                m.insert("source_indices".into(), json!(idx));
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "ambient_dim": ff.ambient_dim(),
        "field": S::FIELD,
        "subspaces": subspaces,
    })
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn parse_field(obj: &Map<String, Value>) -> Result<Option<Field>> {
    match obj.get("field") {
        None => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|_| malformed(format!("unknown field {v}"))),
    }
}

fn parse_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| malformed(format!("missing or invalid \"{key}\"")))
}

fn parse_entry<S: Scalar>(v: &Value) -> Result<S> {
    let (re, im) = match (S::FIELD, v) {
        (Field::Real, Value::Number(n)) => (n.as_f64(), Some(0.0)),
        (Field::Complex, Value::Array(p)) if p.len() == 2 => (p[0].as_f64(), p[1].as_f64()),
        (Field::Real, _) => return Err(malformed(format!("expected a real number, found {v}"))),
        (Field::Complex, _) => return Err(malformed(format!("expected an [re, im] pair, found {v}"))),
    };
    match (re, im) {
        (Some(re), Some(im)) => S::from_parts(re, im).ok_or_else(|| malformed("non-real entry")),
        _ => Err(malformed(format!("non-numeric entry {v}"))),
    }
}

fn parse_columns<S: Scalar>(v: &Value, rows: usize) -> Result<Matrix<S>> {
    let cols = v.as_array().ok_or_else(|| malformed("vectors must be an array of columns"))?;
    let mut data = Vec::with_capacity(rows * cols.len());
    for (j, c) in cols.iter().enumerate() {
        let c = c.as_array().ok_or_else(|| malformed(format!("column {j} is not an array")))?;
        if c.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: c.len(),
            });
        }
        for x in c {
            data.push(parse_entry::<S>(x)?);
        }
    }
    Matrix::from_col_major(rows, cols.len(), data)
}

fn as_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| malformed("expected a JSON object"))
}

/// Parses a frame over `S`, rejecting files that declare the other field.
pub fn frame_from_json<S: Scalar>(v: &Value, tol: Tolerances) -> Result<Frame<S>> {
    let obj = as_object(v)?;
    let field = parse_field(obj)?.unwrap_or(Field::Real);
    if field != S::FIELD {
        return Err(Error::FieldMismatch {
            expected: S::FIELD.to_string(),
            found: field.to_string(),
        });
    }
    let dim = parse_usize(obj, "dim")?;
    let vectors = obj.get("vectors").ok_or_else(|| malformed("missing \"vectors\""))?;
    Frame::with_tolerances(parse_columns(vectors, dim)?, tol)
}

pub fn any_frame_from_json(v: &Value, tol: Tolerances) -> Result<AnyFrame> {
    match parse_field(as_object(v)?)?.unwrap_or(Field::Real) {
        Field::Real => frame_from_json(v, tol).map(AnyFrame::Real),
        Field::Complex => frame_from_json(v, tol).map(AnyFrame::Complex),
    }
}

pub fn fusion_from_json<S: Scalar>(v: &Value, tol: Tolerances) -> Result<FusionFrame<S>> {
    let obj = as_object(v)?;
    let field = parse_field(obj)?.unwrap_or(Field::Real);
    if field != S::FIELD {
        return Err(Error::FieldMismatch {
            expected: S::FIELD.to_string(),
            found: field.to_string(),
        });
    }
    let n = parse_usize(obj, "ambient_dim")?;
    let list = obj
        .get("subspaces")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("missing \"subspaces\" array"))?;
    let mut subspaces = Vec::with_capacity(list.len());
    let mut weights = Vec::with_capacity(list.len());
    for (i, s) in list.iter().enumerate() {
        let s = as_object(s)?;
        let basis = parse_columns::<S>(s.get("basis").ok_or_else(|| malformed(format!("subspace {i} has no basis")))?, n)?;
        let mut sub = Subspace::from_orthonormal(basis, &tol)?;
        if let Some(idx) = s.get("source_indices") {
            let idx: Vec<usize> =
                serde_json::from_value(idx.clone()).map_err(|_| malformed(format!("subspace {i}: bad source_indices")))?;
            sub = sub.with_source(idx);
        }
        subspaces.push(sub);
        weights.push(match s.get("weight") {
            None => 1.0,
            Some(w) => w.as_f64().ok_or_else(|| malformed(format!("subspace {i}: bad weight")))?,
        });
    }
    FusionFrame::new(subspaces, weights, tol)
}

pub fn any_fusion_from_json(v: &Value, tol: Tolerances) -> Result<AnyFusionFrame> {
    match parse_field(as_object(v)?)?.unwrap_or(Field::Real) {
        Field::Real => fusion_from_json(v, tol).map(AnyFusionFrame::Real),
        Field::Complex => fusion_from_json(v, tol).map(AnyFusionFrame::Complex),
    }
}
