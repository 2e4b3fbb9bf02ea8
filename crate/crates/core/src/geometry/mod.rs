//! Sampled CR manifolds: per-point pencils with volume weights, condition
//! `Y(q)`, the compact Heisenberg group and torus Grauert-tube generators, and
//! helpers for boundaries of domains in complex manifolds.

mod embedded;
mod grauert;
mod heisenberg;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::pencil::LeviSignature;
use crate::pencil::PencilInstance;

pub use embedded::{bigness_hypothesis_check, restrict_curvature, BignessReport};
pub use grauert::{grauert_dr_norm, grauert_tube_spec, grauert_volume_density, GrauertGrid};
pub use heisenberg::{heisenberg_spec, heisenberg_volume, heisenberg_volume_density};

/// One quadrature node of a manifold: the pointwise pencil and its volume weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSample {
    pub id: String,
    /// Chart coordinates, informational only.
    pub coords: Vec<f64>,
    pub pencil: PencilInstance,
    /// Volume density times quadrature weight.
    pub dm_weight: f64,
}

/// A CR manifold of real dimension `2n - 1` given by weighted samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldSpec {
    pub name: String,
    pub n: usize,
    pub samples: Vec<PointSample>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl ManifoldSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!(
                "n = {} must be at least 2",
                self.n
            )));
        }
        if self.samples.is_empty() {
            return Err(Error::InconsistentInput("manifold has no samples".into()));
        }
        let mut total = 0.0;
        for (i, s) in self.samples.iter().enumerate() {
            if s.pencil.dim() != self.n - 1 {
                return Err(Error::DimensionMismatch(format!(
                    "sample {i} ({}) has pencil dimension {}, expected {}",
                    s.id,
                    s.pencil.dim(),
                    self.n - 1
                )));
            }
            if !(s.dm_weight > 0.0 && s.dm_weight.is_finite()) {
                return Err(Error::InconsistentInput(format!(
                    "sample {i} ({}) has dm_weight {}",
                    s.id, s.dm_weight
                )));
            }
            total += s.dm_weight;
        }
        if total.is_nan() || total <= 0.0 {
            return Err(Error::InconsistentInput(
                "total volume is not positive".into(),
            ));
        }
        Ok(())
    }

    /// Common Levi signature of all samples, or `MixedSignature`.
    pub fn levi_signature(&self) -> Result<LeviSignature> {
        let first = self
            .samples
            .first()
            .ok_or_else(|| Error::InconsistentInput("manifold has no samples".into()))?
            .pencil
            .levi_signature();
        for (index, s) in self.samples.iter().enumerate().skip(1) {
            let sig = s.pencil.levi_signature();
            if sig != first {
                return Err(Error::MixedSignature {
                    first: (first.n_minus, first.n_plus),
                    other: (sig.n_minus, sig.n_plus),
                    index,
                });
            }
        }
        Ok(first)
    }

    pub fn total_volume(&self) -> f64 {
        crate::sum::pairwise_sum(&self.samples.iter().map(|s| s.dm_weight).collect::<Vec<_>>())
    }
}

fn signature_of(levi_eigs: &[f64]) -> Result<LeviSignature> {
    if let Some(index) = levi_eigs.iter().position(|&l| l == 0.0) {
        return Err(Error::DegenerateLevi { index });
    }
    let n_minus = levi_eigs.iter().filter(|&&l| l < 0.0).count();
    Ok(LeviSignature {
        n_minus,
        n_plus: levi_eigs.len() - n_minus,
    })
}

/// Condition `Y(q)` as defined: at least `max(q+1, n-q)` eigenvalues of one
/// sign, or at least `min(q+1, n-q)` pairs of opposite signs, where
/// `n - 1 = levi_eigs.len()`.
pub fn y_condition(levi_eigs: &[f64], q: usize) -> Result<bool> {
    let sig = signature_of(levi_eigs)?;
    let n = levi_eigs.len() + 1;
    if q > n - 1 {
        return Err(Error::QOutOfRange { q, dim: n - 1 });
    }
    let same_sign = sig.n_minus.max(sig.n_plus);
    let pairs = sig.n_minus.min(sig.n_plus);
    Ok(same_sign >= (q + 1).max(n - q) || pairs >= (q + 1).min(n - q))
}

/// `q` is neither `n_minus` nor `n_plus`.
pub fn y_equiv_signature(levi_eigs: &[f64], q: usize) -> Result<bool> {
    let sig = signature_of(levi_eigs)?;
    if q > sig.dim() {
        return Err(Error::QOutOfRange { q, dim: sig.dim() });
    }
    Ok(q != sig.n_minus && q != sig.n_plus)
}

/// Change of trivialization: `M` becomes `M + tL`.
pub fn trivialization_shift(sample: &PointSample, t: f64) -> PointSample {
    PointSample {
        pencil: sample.pencil.shifted(t),
        ..sample.clone()
    }
}
