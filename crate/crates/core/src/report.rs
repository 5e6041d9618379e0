//! Report envelope, CSV flattening and serde helpers shared by all reports.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Serialises non-finite floats as `null` and reads `null` back as `+∞`.
pub mod serde_inf {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Provenance of an input file.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of_bytes(path: impl Into<String>, bytes: &[u8]) -> Self {
        let digest = Sha256::digest(bytes);
        Self {
            path: path.into(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

/// Wrapper emitted by every CLI command: tool version, resolved config, input
/// digests, then the report itself.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config: &'a C,
    pub inputs: &'a [InputDigest],
    pub report: &'a R,
}

impl<'a, C: Serialize, R: Serialize> Envelope<'a, C, R> {
    pub fn new(command: &'a str, config: &'a C, inputs: &'a [InputDigest], report: &'a R) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            inputs,
            report,
        }
    }
}

/// One row per finding, for spreadsheet consumers.
pub trait CsvRows {
    fn headers(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

pub(crate) fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "inf".to_string()
    }
}

pub(crate) fn fmt_indices(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

pub fn to_csv(report: &dyn CsvRows) -> crate::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(report.headers())
        .map_err(|e| crate::Error::Malformed(e.to_string()))?;
    for row in report.rows() {
        w.write_record(&row).map_err(|e| crate::Error::Malformed(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Malformed(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| crate::Error::Malformed(e.to_string()))
}
