//! Global Morse-inequality right-hand sides: integrals over a sampled manifold
//! of the pointwise `|det|` integrals, the weak and strong Morse coefficients
//! and the Weyl coefficient.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{LeviSignature, ManifoldSpec};
use crate::pencil::{integrate_abs_det, signature_set};
use crate::sum::pairwise_sum;

fn checked_signature(spec: &ManifoldSpec, q: usize) -> Result<LeviSignature> {
    spec.validate()?;
    let sig = spec.levi_signature()?;
    if q > sig.dim() {
        return Err(Error::QOutOfRange { q, dim: sig.dim() });
    }
    if !sig.admits(q) {
        return Err(Error::UnboundedSignatureSet {
            q,
            n_minus: sig.n_minus,
            n_plus: sig.n_plus,
        });
    }
    Ok(sig)
}

/// Per-sample terms `dm_weight * int_{R_q} |det(M + sL)| ds`, in sample order.
pub fn sample_terms(spec: &ManifoldSpec, q: usize) -> Result<Vec<f64>> {
    checked_signature(spec, q)?;
    spec.samples
        .par_iter()
        .map(|s| {
            let set = signature_set(&s.pencil, q)?;
            Ok(s.dm_weight * integrate_abs_det(&s.pencil, &set)?)
        })
        .collect()
}

/// `int_X int_{R_q} |det(M_x + s L_x)| ds dm(x)` by the sample quadrature.
///
/// Samples are evaluated in parallel and reduced by pairwise summation in
/// sample order, so the result does not depend on the worker count.
pub fn global_integral(spec: &ManifoldSpec, q: usize) -> Result<f64> {
    Ok(pairwise_sum(&sample_terms(spec, q)?))
}

/// `(2 pi)^{-n}` times [`global_integral`]: the coefficient of `k^n`.
pub fn weak_morse_coefficient(spec: &ManifoldSpec, q: usize) -> Result<f64> {
    Ok(global_integral(spec, q)? / (2.0 * PI).powi(spec.n as i32))
}

/// Leading coefficient of the small-eigenvalue counting function; same value
/// as the weak Morse coefficient.
pub fn weyl_coefficient(spec: &ManifoldSpec, q: usize) -> Result<f64> {
    weak_morse_coefficient(spec, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `sum_{j <= q} (-1)^{q-j} c_j`
    Lower,
    /// `sum_{j >= q} (-1)^{q-j} c_j`
    Upper,
}

fn strong_range(dim: usize, q: usize, direction: Direction) -> std::ops::RangeInclusive<usize> {
    match direction {
        Direction::Lower => 0..=q,
        Direction::Upper => q..=dim,
    }
}

fn alternating(q: usize, terms: impl Iterator<Item = (usize, f64)>) -> f64 {
    terms
        .map(|(j, c)| if (q + j).is_multiple_of(2) { c } else { -c })
        .sum()
}

/// Alternating sum of weak Morse coefficients; every `j` in the range must satisfy `Y(j)`.
pub fn strong_morse_sums(spec: &ManifoldSpec, q: usize, direction: Direction) -> Result<f64> {
    spec.validate()?;
    let sig = spec.levi_signature()?;
    if q > sig.dim() {
        return Err(Error::QOutOfRange { q, dim: sig.dim() });
    }
    let range = strong_range(sig.dim(), q, direction);
    if let Some(j) = range.clone().find(|&j| !sig.admits(j)) {
        return Err(Error::YViolation { j });
    }
    let coeffs = range
        .map(|j| weak_morse_coefficient(spec, j).map(|c| (j, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(alternating(q, coeffs.into_iter()))
}

/// A per-`q` entry of a report: a number, the `"excluded"` marker for `q`
/// failing `Y(q)`, or an error.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Value(f64),
    Excluded,
    Error { kind: String, message: String },
}

impl BoundValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            BoundValue::Value(v) => Some(*v),
            _ => None,
        }
    }

    fn from_result(r: Result<f64>) -> Self {
        match r {
            Ok(v) => BoundValue::Value(v),
            Err(e) => BoundValue::Error {
                kind: e.kind().into(),
                message: e.to_string(),
            },
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BoundValue::Value(v) => s.serialize_f64(*v),
            BoundValue::Excluded => s.serialize_str("excluded"),
            BoundValue::Error { kind, message } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("error", kind)?;
                m.serialize_entry("message", message)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for BoundValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
            Err { error: String, message: String },
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(BoundValue::Value(v)),
            Raw::Str(s) if s == "excluded" => Ok(BoundValue::Excluded),
            Raw::Str(s) => Err(de::Error::custom(format!("unexpected string {s:?}"))),
            Raw::Err { error, message } => Ok(BoundValue::Error {
                kind: error,
                message,
            }),
        }
    }
}

/// All Morse right-hand sides of a sampled manifold, for every `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorseBoundReport {
    pub n: usize,
    pub levi_signature: LeviSignature,
    pub q_range: Vec<usize>,
    pub per_q_integral: BTreeMap<usize, BoundValue>,
    pub per_q_weak_coeff: BTreeMap<usize, BoundValue>,
    pub per_q_weyl_coeff: BTreeMap<usize, BoundValue>,
    pub strong_lower: BTreeMap<usize, BoundValue>,
    pub strong_upper: BTreeMap<usize, BoundValue>,
    pub y_status: BTreeMap<usize, bool>,
    pub metadata: BTreeMap<String, String>,
}

impl MorseBoundReport {
    /// Report for the listed `q` values (all of `0..n` if `qs` is `None`).
    ///
    /// `MixedSignature` and malformed specs fail the whole report; errors
    /// tied to one `q` are recorded in that entry.
    pub fn compute(spec: &ManifoldSpec, qs: Option<&[usize]>) -> Result<Self> {
        spec.validate()?;
        let sig = spec.levi_signature()?;
        let dim = sig.dim();
        let all: Vec<usize> = (0..=dim).collect();
        let q_range: Vec<usize> = match qs {
            Some(qs) => {
                if let Some(&q) = qs.iter().find(|&&q| q > dim) {
                    return Err(Error::QOutOfRange { q, dim });
                }
                qs.to_vec()
            }
            None => all.clone(),
        };

        // Integrals for every admissible q, needed by the strong sums.
        let integrals: BTreeMap<usize, BoundValue> = all
            .iter()
            .map(|&q| {
                let v = if sig.admits(q) {
                    BoundValue::from_result(global_integral(spec, q))
                } else {
                    BoundValue::Excluded
                };
                (q, v)
            })
            .collect();
        let scale = (2.0 * PI).powi(spec.n as i32);
        let coeffs: BTreeMap<usize, BoundValue> = integrals
            .iter()
            .map(|(&q, v)| {
                let c = match v {
                    BoundValue::Value(x) => BoundValue::Value(x / scale),
                    other => other.clone(),
                };
                (q, c)
            })
            .collect();

        let strong = |q: usize, direction: Direction| -> BoundValue {
            let range = strong_range(dim, q, direction);
            if let Some(j) = range.clone().find(|&j| !sig.admits(j)) {
                let e = Error::YViolation { j };
                return BoundValue::Error {
                    kind: e.kind().into(),
                    message: e.to_string(),
                };
            }
            let mut terms = Vec::new();
            for j in range {
                match &coeffs[&j] {
                    BoundValue::Value(c) => terms.push((j, *c)),
                    other => return other.clone(),
                }
            }
            BoundValue::Value(alternating(q, terms.into_iter()))
        };

        let pick = |m: &BTreeMap<usize, BoundValue>| -> BTreeMap<usize, BoundValue> {
            q_range.iter().map(|q| (*q, m[q].clone())).collect()
        };
        let mut metadata = spec.metadata.clone();
        metadata.insert("manifold".into(), spec.name.clone());
        metadata.insert("sample_count".into(), spec.samples.len().to_string());
        metadata.insert(
            "quadrature".into(),
            "weighted sample sum, pairwise reduction in sample order".into(),
        );
        Ok(Self {
            n: spec.n,
            levi_signature: sig,
            per_q_integral: pick(&integrals),
            per_q_weak_coeff: pick(&coeffs),
            per_q_weyl_coeff: pick(&coeffs),
            strong_lower: q_range
                .iter()
                .map(|&q| (q, strong(q, Direction::Lower)))
                .collect(),
            strong_upper: q_range
                .iter()
                .map(|&q| (q, strong(q, Direction::Upper)))
                .collect(),
            y_status: q_range.iter().map(|&q| (q, sig.admits(q))).collect(),
            q_range,
            metadata,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::heisenberg_spec;

    #[test]
    fn heisenberg_global_integral() {
        let spec = heisenberg_spec(&[-1, 1], &[1, 1], 10).unwrap();
        let vol = 16.0 * PI.powi(3);
        let v = global_integral(&spec, 0).unwrap();
        assert!((v - vol * 4.0 / 3.0).abs() < 1e-10 * v);
        let c = weak_morse_coefficient(&spec, 0).unwrap();
        assert!((c - v / (2.0 * PI).powi(3)).abs() < 1e-15 * c);
        assert_eq!(weyl_coefficient(&spec, 0).unwrap(), c);
    }

    #[test]
    fn equal_weights_vanish() {
        let spec = heisenberg_spec(&[-1, 1], &[-1, 1], 10).unwrap();
        assert_eq!(weak_morse_coefficient(&spec, 0).unwrap(), 0.0);
        assert_eq!(weak_morse_coefficient(&spec, 2).unwrap(), 0.0);
    }

    #[test]
    fn strong_sums() {
        let spec = heisenberg_spec(&[-1, 1], &[1, 1], 4).unwrap();
        assert_eq!(
            strong_morse_sums(&spec, 0, Direction::Lower).unwrap(),
            weak_morse_coefficient(&spec, 0).unwrap()
        );
        assert!(matches!(
            strong_morse_sums(&spec, 1, Direction::Lower),
            Err(Error::YViolation { j: 1 })
        ));
        assert_eq!(
            strong_morse_sums(&spec, 2, Direction::Upper).unwrap(),
            weak_morse_coefficient(&spec, 2).unwrap()
        );
    }

    #[test]
    fn report_marks_excluded() {
        let spec = heisenberg_spec(&[-1, 1], &[1, 1], 4).unwrap();
        let r = MorseBoundReport::compute(&spec, None).unwrap();
        assert_eq!(r.per_q_weak_coeff[&1], BoundValue::Excluded);
        assert!(r.per_q_weak_coeff[&0].value().unwrap() > 0.0);
        assert_eq!(r.strong_lower[&0], r.per_q_weak_coeff[&0]);
        assert_eq!(r.strong_upper[&2], r.per_q_weak_coeff[&2]);
        assert_eq!(
            r.y_status,
            BTreeMap::from([(0, true), (1, false), (2, true)])
        );
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"excluded\""));
        let back: MorseBoundReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
