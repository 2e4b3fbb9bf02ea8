use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pencil::{signature_set, HermitianForm, PencilInstance};

/// Restriction of `RL` to the complex tangent space `{v : sum_j dr_j v_j = 0}`,
/// in an orthonormal basis obtained by Gram-Schmidt on the projected
/// standard basis vectors.
pub fn restrict_curvature(rl: &HermitianForm, dr: &[Complex64]) -> Result<HermitianForm> {
    let n = rl.dim();
    if dr.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "gradient has {} entries, curvature form has dimension {n}",
            dr.len()
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(
            "restriction needs ambient dimension at least 2".into(),
        ));
    }
    let norm = dr.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm.is_nan() || norm <= 0.0 || norm.is_infinite() {
        return Err(Error::ZeroGradient);
    }
    // Unit normal: v lies in the kernel iff <v, w> = 0.
    let w: Vec<Complex64> = dr.iter().map(|c| c.conj() / norm).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| w[a].norm().total_cmp(&w[b].norm()));

    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n - 1);
    for &k in order.iter().take(n - 1) {
        let mut v: Vec<Complex64> = (0..n)
            .map(|j| {
                let e = if j == k { 1.0 } else { 0.0 };
                Complex64::new(e, 0.0) - w[j] * w[k].conj()
            })
            .collect();
        for _ in 0..2 {
            project_out(&mut v, &w);
            for b in &basis {
                project_out(&mut v, b);
            }
        }
        let len = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|c| *c /= len);
        basis.push(v);
    }
    let u = DMatrix::from_fn(n, n - 1, |j, t| basis[t][j]);
    rl.congruence(&u)
}

fn project_out(v: &mut [Complex64], unit: &[Complex64]) {
    let coeff: Complex64 = unit.iter().zip(v.iter()).map(|(u, x)| u.conj() * x).sum();
    for (x, u) in v.iter_mut().zip(unit) {
        *x -= coeff * u;
    }
}

/// Outcome of checking the bigness hypotheses at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BignessReport {
    /// Levi eigenvalues relative to the curvature: negatives first, each
    /// group ordered by increasing absolute value.
    pub relative_eigenvalues: Vec<f64>,
    pub n_minus: usize,
    pub n_plus: usize,
    pub two_of_each_sign: bool,
    /// `lambda_1 = lambda_2`.
    pub negative_pair_equal: bool,
    /// `lambda_{n_- + 1} = lambda_{n_- + 2}`.
    pub positive_pair_equal: bool,
    pub multiplicity_condition: bool,
    /// Measure of the `q = 0` signature set of `(M, L) = (RL, Levi)`; `None` if unbounded.
    pub r0_measure: Option<f64>,
    /// Whether the `q = 1` signature set is empty; `None` if unbounded.
    pub r1_empty: Option<bool>,
    pub hypotheses_satisfied: bool,
}

const MULTIPLICITY_TOL: f64 = 1e-9;

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= MULTIPLICITY_TOL * a.abs().max(b.abs())
}

/// Checks the sign-count and eigenvalue-multiplicity hypotheses for the Levi
/// form relative to a positive curvature form, and computes the `q = 0, 1`
/// signature sets of the pencil `RL + s Levi`.
pub fn bigness_hypothesis_check(levi: &HermitianForm, rl: &HermitianForm) -> Result<BignessReport> {
    if levi.dim() != rl.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Levi form has dimension {}, curvature form {}",
            levi.dim(),
            rl.dim()
        )));
    }
    let eig = SymmetricEigen::new(rl.matrix().clone());
    let scale = eig.eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let min_eigenvalue = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eigenvalue.is_nan() || min_eigenvalue <= 1e-12 * scale {
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }
    let inv_sqrt =
        DMatrix::from_diagonal(&eig.eigenvalues.map(|v| Complex64::new(v.powf(-0.5), 0.0)));
    let s_inv = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint();
    let relative = levi.congruence(&s_inv)?.eigenvalues();
    if let Some(index) = relative.iter().position(|&v| v == 0.0) {
        return Err(Error::DegenerateLevi { index });
    }

    let mut neg: Vec<f64> = relative.iter().copied().filter(|v| *v < 0.0).collect();
    let mut pos: Vec<f64> = relative.iter().copied().filter(|v| *v > 0.0).collect();
    neg.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    pos.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let (n_minus, n_plus) = (neg.len(), pos.len());
    let two_of_each_sign = n_minus >= 2 && n_plus >= 2;
    let negative_pair_equal = n_minus >= 2 && nearly_equal(neg[0], neg[1]);
    let positive_pair_equal = n_plus >= 2 && nearly_equal(pos[0], pos[1]);
    let multiplicity_condition = negative_pair_equal && positive_pair_equal;

    let pencil = PencilInstance::new(rl.clone(), levi.clone())?;
    let bounded = |q: usize| pencil.levi_signature().admits(q);
    let r0_measure = if bounded(0) {
        Some(signature_set(&pencil, 0)?.measure())
    } else {
        None
    };
    let r1_empty = if bounded(1) {
        Some(signature_set(&pencil, 1)?.is_empty())
    } else {
        None
    };

    let mut relative_eigenvalues = neg;
    relative_eigenvalues.extend(pos);
    Ok(BignessReport {
        relative_eigenvalues,
        n_minus,
        n_plus,
        two_of_each_sign,
        negative_pair_equal,
        positive_pair_equal,
        multiplicity_condition,
        r0_measure,
        r1_empty,
        hypotheses_satisfied: two_of_each_sign && multiplicity_condition,
    })
}
