//! JSON file formats and command reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::distribution::{DistributionSamples, SampleEntry};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector, DEFAULT_TOL};
use crate::tensor::{validate_symmetries, CurvatureTensor};

pub const SCHEMA_VERSION: u32 = 1;
pub const BASIS: &str = "orthonormal-standard";
pub const CONVENTION: &str = "R[i][j][k][l] = <R(e_i,e_j)e_k, e_l>";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub schema_version: u32,
    pub dim: usize,
    pub basis: String,
    pub convention: String,
    pub components: Vec<f64>,
}

impl TensorFile {
    pub fn from_tensor(r: &CurvatureTensor) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dim: r.dim(),
            basis: BASIS.into(),
            convention: CONVENTION.into(),
            components: r.components().to_vec(),
        }
    }

    /// Checks the literals and the component count; does not check the
    /// curvature identities.
    pub fn into_tensor(self) -> Result<CurvatureTensor> {
        if self.basis != BASIS {
            return Err(Error::ParseError(format!("unsupported basis {:?}", self.basis)));
        }
        if self.convention != CONVENTION {
            return Err(Error::ParseError(format!("unsupported convention {:?}", self.convention)));
        }
        let want = self.dim.pow(4);
        if self.components.len() != want {
            return Err(Error::ParseError(format!(
                "expected dim^4 = {want} components, found {}",
                self.components.len()
            )));
        }
        CurvatureTensor::from_components(self.dim, self.components)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRecord {
    pub s: Vec<f64>,
    pub tangents: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplesFile {
    pub schema_version: u32,
    pub dim: usize,
    pub entries: Vec<SampleRecord>,
}

impl SamplesFile {
    pub fn from_samples(samples: &DistributionSamples) -> Self {
        let entries = samples
            .entries()
            .iter()
            .map(|e| SampleRecord {
                s: e.s.iter().copied().collect(),
                tangents: e.tangents.iter().map(|t| t.iter().copied().collect()).collect(),
            })
            .collect();
        Self { schema_version: SCHEMA_VERSION, dim: samples.dim(), entries }
    }

    pub fn into_samples(self) -> Result<DistributionSamples> {
        let d = self.dim;
        let check = |v: &Vec<f64>| {
            if v.len() == d {
                Ok(Vector::from_column_slice(v))
            } else {
                Err(Error::ParseError(format!("vector of length {} in a dimension-{d} file", v.len())))
            }
        };
        let mut entries = Vec::with_capacity(self.entries.len());
        for rec in &self.entries {
            let s = check(&rec.s)?;
            let tangents = rec.tangents.iter().map(check).collect::<Result<Vec<_>>>()?;
            entries.push(SampleEntry { s, tangents });
        }
        DistributionSamples::new(d, entries)
    }
}

/// A square matrix, stored by rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub schema_version: u32,
    pub dim: usize,
    pub rows: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix) -> Self {
        Self { schema_version: SCHEMA_VERSION, dim: m.nrows(), rows: matrix_rows(m) }
    }

    pub fn into_matrix(self) -> Result<Matrix> {
        let d = self.dim;
        if self.rows.len() != d || self.rows.iter().any(|r| r.len() != d) {
            return Err(Error::ParseError(format!("matrix file is not {d}×{d}")));
        }
        Ok(Matrix::from_fn(d, d, |i, j| self.rows[i][j]))
    }
}

pub fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Parses a versioned JSON document: the version is checked before the
/// rest of the layout.
fn parse_versioned<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    let version = value
        .get("schema_version")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::ParseError("missing integer schema_version".into()))?;
    if version != SCHEMA_VERSION as u64 {
        return Err(Error::SchemaVersionUnsupported(version.min(u32::MAX as u64) as u32));
    }
    serde_json::from_value(value).map_err(|e| Error::ParseError(e.to_string()))
}

/// Parses a tensor document and checks the curvature identities at `tol`.
pub fn parse_tensor(text: &str, tol: f64) -> Result<CurvatureTensor> {
    let r = parse_versioned::<TensorFile>(text)?.into_tensor()?;
    let report = validate_symmetries(&r, None)?;
    if let Some((identity, residual)) = report.first_violation(tol) {
        return Err(Error::SymmetryViolation { identity, residual });
    }
    Ok(r)
}

pub fn tensor_to_json(r: &CurvatureTensor) -> String {
    serde_json::to_string_pretty(&TensorFile::from_tensor(r)).expect("tensor files serialize")
}

pub fn load_tensor(path: impl AsRef<Path>) -> Result<CurvatureTensor> {
    load_tensor_with_tol(path, DEFAULT_TOL)
}

pub fn load_tensor_with_tol(path: impl AsRef<Path>, tol: f64) -> Result<CurvatureTensor> {
    parse_tensor(&std::fs::read_to_string(path)?, tol)
}

pub fn save_tensor(r: &CurvatureTensor, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, tensor_to_json(r) + "\n")?;
    Ok(())
}

pub fn parse_samples(text: &str) -> Result<DistributionSamples> {
    parse_versioned::<SamplesFile>(text)?.into_samples()
}

pub fn load_samples(path: impl AsRef<Path>) -> Result<DistributionSamples> {
    parse_samples(&std::fs::read_to_string(path)?)
}

pub fn save_samples(samples: &DistributionSamples, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&SamplesFile::from_samples(samples)).expect("sample files serialize");
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    parse_versioned::<MatrixFile>(text)?.into_matrix()
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn save_matrix(m: &Matrix, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&MatrixFile::from_matrix(m)).expect("matrix files serialize");
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Hex SHA-256 of a byte string.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Rejected,
    Error,
}

/// Output of one command. Results and flags are kept in sorted maps so the
/// JSON layout is identical across runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(flatten)]
    pub results: BTreeMap<String, Value>,
    pub flags: BTreeMap<String, bool>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            input_digest: None,
            status: Status::Ok,
            reason: None,
            message: None,
            results: BTreeMap::new(),
            flags: BTreeMap::new(),
        }
    }

    pub fn with_digest(mut self, bytes: &[u8]) -> Self {
        self.input_digest = Some(digest(bytes));
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.into(), value.into());
        self
    }

    pub fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        self.flags.insert(key.into(), value);
        self
    }

    pub fn fail(&mut self, status: Status, reason: &str, message: String) -> &mut Self {
        self.status = status;
        self.reason = Some(reason.into());
        self.message = Some(message);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = match self.status {
            Status::Ok => "ok",
            Status::Rejected => "rejected",
            Status::Error => "error",
        };
        let _ = writeln!(out, "{}: {status}", self.command);
        if let Some(d) = &self.input_digest {
            let _ = writeln!(out, "  input sha256: {d}");
        }
        if let Some(r) = &self.reason {
            let _ = writeln!(out, "  reason: {r}");
        }
        if let Some(m) = &self.message {
            let _ = writeln!(out, "  message: {m}");
        }
        for (k, v) in &self.results {
            match v {
                Value::String(s) => {
                    let _ = writeln!(out, "  {k}: {s}");
                }
                Value::Array(rows) if rows.iter().all(Value::is_array) && !rows.is_empty() => {
                    let _ = writeln!(out, "  {k}:");
                    for row in rows {
                        let _ = writeln!(out, "    {row}");
                    }
                }
                other => {
                    let _ = writeln!(out, "  {k}: {other}");
                }
            }
        }
        for (k, v) in &self.flags {
            let _ = writeln!(out, "  [{}] {k}", if *v { "pass" } else { "FAIL" });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_skew;
    use crate::tensor::{build_model, build_r1, Tau};

    #[test]
    fn tensor_round_trip_is_bitwise() {
        let r = build_model(0.3, Tau::Minus, &random_skew(4, 8)).unwrap();
        let back = parse_tensor(&tensor_to_json(&r), 1e-9).unwrap();
        let same = r.components().iter().zip(back.components()).all(|(a, b)| a.to_bits() == b.to_bits());
        assert!(same);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r1.json");
        save_tensor(&build_r1(4), &path).unwrap();
        assert_eq!(load_tensor(&path).unwrap(), build_r1(4));
    }

    #[test]
    fn tensor_parse_failures() {
        let mut file = TensorFile::from_tensor(&build_r1(3));
        file.components.pop();
        let text = serde_json::to_string(&file).unwrap();
        assert!(matches!(parse_tensor(&text, 1e-9), Err(Error::ParseError(_))));

        let mut file = TensorFile::from_tensor(&build_r1(3));
        file.schema_version = 2;
        let text = serde_json::to_string(&file).unwrap();
        assert!(matches!(parse_tensor(&text, 1e-9), Err(Error::SchemaVersionUnsupported(2))));

        assert!(matches!(parse_tensor("{not json", 1e-9), Err(Error::ParseError(_))));

        let mut r = build_r1(3);
        r.set(0, 1, 2, 0, 0.5);
        let text = tensor_to_json(&r);
        match parse_tensor(&text, 1e-9) {
            Err(Error::SymmetryViolation { identity, .. }) => assert_eq!(identity, "antisymmetry"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn matrix_and_samples_round_trip() {
        let m = random_skew(3, 2).into_matrix();
        assert_eq!(parse_matrix(&serde_json::to_string(&MatrixFile::from_matrix(&m)).unwrap()).unwrap(), m);
        let bad = r#"{"schema_version":1,"dim":2,"rows":[[0.0,1.0]]}"#;
        assert!(matches!(parse_matrix(bad), Err(Error::ParseError(_))));

        let text = r#"{"schema_version":1,"dim":3,"entries":[{"s":[1,0,0],"tangents":[[0,2,0]]}]}"#;
        let samples = parse_samples(text).unwrap();
        assert_eq!(samples.entries()[0].tangents[0][1], 1.0);
        let again = parse_samples(&serde_json::to_string(&SamplesFile::from_samples(&samples)).unwrap()).unwrap();
        assert_eq!(again, samples);
    }

    #[test]
    fn report_layout_is_stable() {
        let build = || {
            let mut rep = Report::new("classify").with_digest(b"abc");
            rep.set("kappa", 1.0).set("case", 3).flag("kahler", true);
            rep
        };
        assert_eq!(build().to_json(), build().to_json());
        let json: Value = serde_json::from_str(&build().to_json()).unwrap();
        assert_eq!(json["case"], 3);
        assert_eq!(
            json["input_digest"],
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert!(build().to_text().contains("[pass] kahler"));
    }
}
