//! JSON matrix documents.
//!
//! ```json
//! {"kind": "rotation", "data": [[1,0,0],[0,1,0],[0,0,1]], "meta": {"note": "..."}}
//! ```
//!
//! `rotation` and `correlation` carry 3x3 real arrays, `unitary` a 2x2 and
//! `density` a 4x4 array of `[re, im]` pairs, and `bloch` an object
//! `{"a": [..3], "b": [..3], "T": [[..3]..3]}`. `report` documents carry a
//! free-form object. Any other top-level fields are diagnostics and are
//! ignored on input.

use std::collections::BTreeMap;

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3};
use num_complex::Complex64;
use serde_json::{json, Map, Value};
use su2lift::{BlochForm, DensityMatrix4, Rotation3, SpecialUnitary2, Tolerance};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Rotation,
    Unitary,
    Density,
    Correlation,
    Bloch,
    Report,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Rotation => "rotation",
            Kind::Unitary => "unitary",
            Kind::Density => "density",
            Kind::Correlation => "correlation",
            Kind::Bloch => "bloch",
            Kind::Report => "report",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "rotation" => Kind::Rotation,
            "unitary" => Kind::Unitary,
            "density" => Kind::Density,
            "correlation" => Kind::Correlation,
            "bloch" => Kind::Bloch,
            "report" => Kind::Report,
            _ => return None,
        })
    }
}

/// Validated document contents.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Rotation(Rotation3),
    Unitary(SpecialUnitary2),
    Density(DensityMatrix4),
    Correlation(Matrix3<f64>),
    Bloch(BlochForm),
    Report(Map<String, Value>),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Rotation(_) => Kind::Rotation,
            Payload::Unitary(_) => Kind::Unitary,
            Payload::Density(_) => Kind::Density,
            Payload::Correlation(_) => Kind::Correlation,
            Payload::Bloch(_) => Kind::Bloch,
            Payload::Report(_) => Kind::Report,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDocument {
    pub payload: Payload,
    pub meta: BTreeMap<String, String>,
}

impl MatrixDocument {
    pub fn new(payload: Payload) -> Self {
        Self {
            payload,
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: &str) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn kind(&self) -> Kind {
        self.payload.kind()
    }

    /// `kind`, `data`, then `extras` in the given order, then `meta` if any.
    pub fn to_json(&self, extras: Vec<(&str, Value)>) -> Value {
        let mut obj = Map::new();
        obj.insert("kind".into(), Value::from(self.kind().as_str()));
        obj.insert("data".into(), payload_data(&self.payload));
        for (k, v) in extras {
            obj.insert(k.into(), v);
        }
        if !self.meta.is_empty() {
            let meta: Map<String, Value> = self
                .meta
                .iter()
                .map(|(k, v)| (k.clone(), Value::from(v.as_str())))
                .collect();
            obj.insert("meta".into(), Value::Object(meta));
        }
        Value::Object(obj)
    }
}

pub fn real_json(x: f64) -> Value {
    json!(x)
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn rows3(m: &Matrix3<f64>) -> Value {
    Value::Array((0..3).map(|i| json!([m[(i, 0)], m[(i, 1)], m[(i, 2)]])).collect())
}

fn complex_rows<const N: usize>(get: impl Fn(usize, usize) -> Complex64) -> Value {
    Value::Array(
        (0..N)
            .map(|i| Value::Array((0..N).map(|j| complex_json(get(i, j))).collect()))
            .collect(),
    )
}

pub fn vec3_json(v: &Vector3<f64>) -> Value {
    json!([v[0], v[1], v[2]])
}

fn payload_data(p: &Payload) -> Value {
    match p {
        Payload::Rotation(o) => rows3(o.matrix()),
        Payload::Correlation(t) => rows3(t),
        Payload::Unitary(u) => complex_rows::<2>(|i, j| u.matrix()[(i, j)]),
        Payload::Density(r) => complex_rows::<4>(|i, j| r.matrix()[(i, j)]),
        Payload::Bloch(bf) => json!({
            "a": vec3_json(&bf.a),
            "b": vec3_json(&bf.b),
            "T": rows3(&bf.t),
        }),
        Payload::Report(m) => Value::Object(m.clone()),
    }
}

fn shape(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

fn real(v: &Value, what: &str) -> Result<f64, CliError> {
    v.as_f64()
        .ok_or_else(|| shape(format!("{what}: expected a number, got {v}")))
}

fn complex(v: &Value, what: &str) -> Result<Complex64, CliError> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            Ok(Complex64::new(real(&pair[0], what)?, real(&pair[1], what)?))
        }
        // a bare number is accepted as a real entry
        Value::Number(_) => Ok(Complex64::new(real(v, what)?, 0.0)),
        _ => Err(shape(format!("{what}: expected [re, im], got {v}"))),
    }
}

fn grid<T>(
    v: &Value,
    n: usize,
    what: &str,
    entry: impl Fn(&Value, &str) -> Result<T, CliError>,
) -> Result<Vec<Vec<T>>, CliError> {
    let rows = v
        .as_array()
        .filter(|r| r.len() == n)
        .ok_or_else(|| shape(format!("{what}: expected {n} rows")))?;
    rows.iter()
        .map(|row| {
            let row = row
                .as_array()
                .filter(|r| r.len() == n)
                .ok_or_else(|| shape(format!("{what}: expected {n}x{n} entries")))?;
            row.iter().map(|x| entry(x, what)).collect()
        })
        .collect()
}

fn matrix3(v: &Value, what: &str) -> Result<Matrix3<f64>, CliError> {
    let g = grid(v, 3, what, real)?;
    Ok(Matrix3::from_fn(|i, j| g[i][j]))
}

fn vector3(v: &Value, what: &str) -> Result<Vector3<f64>, CliError> {
    let a = v
        .as_array()
        .filter(|a| a.len() == 3)
        .ok_or_else(|| shape(format!("{what}: expected 3 entries")))?;
    Ok(Vector3::new(real(&a[0], what)?, real(&a[1], what)?, real(&a[2], what)?))
}

fn parse_value(v: &Value, tol: Tolerance) -> Result<MatrixDocument, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| shape("document must be a JSON object"))?;
    let kind_str = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| shape("missing string field \"kind\""))?;
    let kind = Kind::parse(kind_str).ok_or_else(|| shape(format!("unknown kind \"{kind_str}\"")))?;
    let data = obj.get("data").ok_or_else(|| shape("missing field \"data\""))?;

    let payload = match kind {
        Kind::Rotation => Payload::Rotation(Rotation3::new(matrix3(data, "rotation")?, tol)?),
        Kind::Correlation => {
            let t = matrix3(data, "correlation")?;
            if !t.iter().all(|x| x.is_finite()) {
                return Err(su2lift::Error::NonFinite.into());
            }
            Payload::Correlation(t)
        }
        Kind::Unitary => {
            let g = grid(data, 2, "unitary", complex)?;
            Payload::Unitary(SpecialUnitary2::new(Matrix2::from_fn(|i, j| g[i][j]), tol)?)
        }
        Kind::Density => {
            let g = grid(data, 4, "density", complex)?;
            Payload::Density(DensityMatrix4::new(Matrix4::from_fn(|i, j| g[i][j]), tol)?)
        }
        Kind::Bloch => {
            let o = data
                .as_object()
                .ok_or_else(|| shape("bloch: data must be an object with a, b, T"))?;
            let field = |k: &str| o.get(k).ok_or_else(|| shape(format!("bloch: missing \"{k}\"")));
            let bf = BlochForm::new(
                vector3(field("a")?, "bloch.a")?,
                vector3(field("b")?, "bloch.b")?,
                matrix3(field("T")?, "bloch.T")?,
            );
            if !(bf.a.iter().chain(bf.b.iter()).chain(bf.t.iter())).all(|x| x.is_finite()) {
                return Err(su2lift::Error::NonFinite.into());
            }
            Payload::Bloch(bf)
        }
        Kind::Report => Payload::Report(
            data.as_object()
                .cloned()
                .ok_or_else(|| shape("report: data must be an object"))?,
        ),
    };

    let mut meta = BTreeMap::new();
    if let Some(m) = obj.get("meta") {
        let m = m.as_object().ok_or_else(|| shape("meta must be an object"))?;
        for (k, v) in m {
            let v = v
                .as_str()
                .ok_or_else(|| shape(format!("meta.{k} must be a string")))?;
            meta.insert(k.clone(), v.to_string());
        }
    }
    Ok(MatrixDocument { payload, meta })
}

/// Parses and validates a single document.
pub fn parse_document(text: &str, tol: Tolerance) -> Result<MatrixDocument, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| shape(format!("malformed JSON: {e}")))?;
    parse_value(&v, tol)
}

/// Parses either one document or a JSON array of documents.
pub fn parse_documents(text: &str, tol: Tolerance) -> Result<Vec<MatrixDocument>, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| shape(format!("malformed JSON: {e}")))?;
    match &v {
        Value::Array(items) => items.iter().map(|d| parse_value(d, tol)).collect(),
        _ => Ok(vec![parse_value(&v, tol)?]),
    }
}
