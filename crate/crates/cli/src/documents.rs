//! Wire formats: the point input document and the report document.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crmorse_core::pencil::{ComplexRows, HermitianForm, PencilInstance};

use crate::error::{CliError, CliResult};

pub const POINT_DOCUMENT_VERSION: &str = "1";

/// Largest tolerated `|A_jt - conj(A_tj)|`, relative to `1 + max |A|`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// One pencil `(M, L)` with complex entries as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointInputDocument {
    pub version: String,
    pub dim: usize,
    #[serde(rename = "M")]
    pub m: ComplexRows,
    #[serde(rename = "L")]
    pub l: ComplexRows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl PointInputDocument {
    /// Parses the JSON text; syntax and schema errors carry line and column.
    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_pencil(p: &PencilInstance, label: Option<String>) -> Self {
        Self {
            version: POINT_DOCUMENT_VERSION.into(),
            dim: p.dim(),
            m: p.m().to_complex_rows(),
            l: p.l().to_complex_rows(),
            label,
        }
    }

    /// Checks shape, finiteness and Hermitian symmetry field by field, then
    /// builds the pencil.
    pub fn to_pencil(&self) -> CliResult<PencilInstance> {
        if self.version != POINT_DOCUMENT_VERSION {
            return Err(CliError::field(
                "version",
                format!(
                    "unsupported version {:?}, expected {POINT_DOCUMENT_VERSION:?}",
                    self.version
                ),
            ));
        }
        if self.dim == 0 {
            return Err(CliError::field("dim", "dim must be positive"));
        }
        let m = hermitian_field("M", &self.m, self.dim)?;
        let l = hermitian_field("L", &self.l, self.dim)?;
        Ok(PencilInstance::new(m, l)?)
    }
}

fn hermitian_field(name: &str, rows: &ComplexRows, dim: usize) -> CliResult<HermitianForm> {
    if rows.len() != dim {
        return Err(CliError::field(
            name,
            format!("{name} has {} rows, expected {dim}", rows.len()),
        ));
    }
    for (j, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(CliError::field(
                format!("{name}[{j}]"),
                format!("{name}[{j}] has {} entries, expected {dim}", row.len()),
            ));
        }
        if let Some(t) = row
            .iter()
            .position(|z| !z[0].is_finite() || !z[1].is_finite())
        {
            return Err(CliError::field(
                format!("{name}[{j}][{t}]"),
                format!("{name}[{j}][{t}] is not finite"),
            ));
        }
    }
    let z = |j: usize, t: usize| Complex64::new(rows[j][t][0], rows[j][t][1]);
    let scale = 1.0
        + rows
            .iter()
            .flatten()
            .fold(0.0_f64, |a, p| a.max(p[0].hypot(p[1])));
    for j in 0..dim {
        for t in j..dim {
            let gap = (z(j, t) - z(t, j).conj()).norm();
            if gap > HERMITIAN_TOL * scale {
                return Err(CliError::field(
                    format!("{name}[{j}][{t}]"),
                    format!("{name} is not Hermitian: |{name}[{j}][{t}] - conj({name}[{t}][{j}])| = {gap:e}"),
                ));
            }
        }
    }
    Ok(HermitianForm::from_complex_rows(rows)?)
}

/// Numeric agreement between a closed-form value and an independent one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub name: String,
    pub analytic: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    /// Acceptance threshold on `rel_diff`, or on `abs_diff` when `analytic` is 0.
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub detail: BTreeMap<String, Value>,
}

impl OracleComparison {
    pub fn new(name: impl Into<String>, analytic: f64, oracle: f64, tolerance: f64) -> Self {
        let abs_diff = (analytic - oracle).abs();
        let rel_diff = if analytic == 0.0 {
            abs_diff
        } else {
            abs_diff / analytic.abs()
        };
        Self {
            name: name.into(),
            analytic,
            oracle,
            abs_diff,
            rel_diff,
            tolerance,
            passed: rel_diff <= tolerance,
            detail: BTreeMap::new(),
        }
    }

    pub fn with_detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.detail.insert(key.into(), value.into());
        self
    }
}

/// A tolerance in force while producing a report, and what it governs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceNote {
    pub value: f64,
    pub applies_to: String,
}

/// Output of every analysis command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    /// `sha256:<hex>` of the input file, or of the canonical parameter string.
    pub input_digest: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub oracle_comparisons: Vec<OracleComparison>,
    pub tolerances: BTreeMap<String, ToleranceNote>,
    pub provenance: BTreeMap<String, String>,
    pub wall_time_seconds: f64,
}

impl ReportDocument {
    pub fn new(command: &str, input_digest: String) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input_digest,
            parameters: BTreeMap::new(),
            results: Value::Null,
            oracle_comparisons: Vec::new(),
            tolerances: BTreeMap::new(),
            provenance: BTreeMap::new(),
            wall_time_seconds: 0.0,
        }
    }

    pub fn tolerance(&mut self, name: &str, value: f64, applies_to: &str) {
        self.tolerances.insert(
            name.into(),
            ToleranceNote {
                value,
                applies_to: applies_to.into(),
            },
        );
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn sha256_digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = r#"{
        "version": "1",
        "dim": 2,
        "M": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
        "L": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
        "label": "fixture"
    }"#;

    #[test]
    fn parses_fixture() {
        let doc = PointInputDocument::parse(FIXTURE).unwrap();
        let p = doc.to_pencil().unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.l().diagonal_real(), vec![1.0, -1.0]);
    }

    #[test]
    fn round_trip_is_identical() {
        let doc = PointInputDocument::parse(FIXTURE).unwrap();
        let again = PointInputDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
        let odd = PointInputDocument {
            m: vec![
                vec![[0.1, 0.0], [1.0 / 3.0, -2e-300]],
                vec![[1.0 / 3.0, 2e-300], [-7.25, 0.0]],
            ],
            ..doc
        };
        assert_eq!(PointInputDocument::parse(&odd.to_json()).unwrap(), odd);
    }

    #[test]
    fn syntax_error_has_position() {
        let err =
            PointInputDocument::parse("{\n  \"version\": \"1\",\n  \"dim\": ,\n}").unwrap_err();
        match err {
            CliError::Parse { line, column, .. } => {
                assert_eq!(line, Some(3));
                assert!(column.unwrap() > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shape_errors_name_the_field() {
        let mut doc = PointInputDocument::parse(FIXTURE).unwrap();
        doc.m[1].push([0.0, 0.0]);
        let err = doc.to_pencil().unwrap_err();
        assert!(
            matches!(err, CliError::Parse { field: Some(ref f), .. } if f == "M[1]"),
            "{err:?}"
        );
    }

    #[test]
    fn asymmetry_is_rejected() {
        let mut doc = PointInputDocument::parse(FIXTURE).unwrap();
        doc.l[0][1] = [0.0, 1.0];
        doc.l[1][0] = [0.0, 1.0];
        let err = doc.to_pencil().unwrap_err();
        assert!(
            matches!(err, CliError::Parse { field: Some(ref f), .. } if f == "L[0][1]"),
            "{err:?}"
        );
        assert_eq!(err.exit_code(), crate::error::EXIT_USAGE);
    }

    #[test]
    fn singular_levi_is_math_domain() {
        let mut doc = PointInputDocument::parse(FIXTURE).unwrap();
        doc.l[1][1] = [0.0, 0.0];
        let err = doc.to_pencil().unwrap_err();
        assert_eq!(err.kind(), "SingularLevi");
        assert_eq!(err.exit_code(), crate::error::EXIT_MATH_DOMAIN);
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            sha256_digest(b"abc"),
            "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
