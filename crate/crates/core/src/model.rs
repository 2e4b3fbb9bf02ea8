//! Heisenberg-group model at a point: the weight `Phi_eta`, the model matrix
//! `M_{Phi_eta} = (mu_{jt} - sqrt(2) eta lambda_j delta_{jt})`, the set of `eta`
//! where it has signature `(q, dim - q)`, the Bergman kernel trace and the
//! extremal value.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pencil::{
    integrate_abs_det, signature_set, HermitianForm, Interval, LeviSignature, PencilInstance,
    SignatureSet,
};
use crate::quadrature::{radial_tensor_integral, GaussLaguerre};

/// Number of Gauss-Laguerre nodes per complex dimension in [`harmonic_norm_check`].
pub const HARMONIC_QUADRATURE_NODES: usize = 64;

/// Local model data at a point: Levi eigenvalues `lambda_j`, the Hermitian
/// coefficients `mu_{jt}` of the weight, and the `theta` coefficient `beta`.
///
/// `beta` is carried so normal-form data round-trips, but no computed
/// functional depends on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    lambda: Vec<f64>,
    mu: HermitianForm,
    beta: f64,
}

impl ModelParams {
    pub fn new(lambda: Vec<f64>, mu: HermitianForm, beta: f64) -> Result<Self> {
        if lambda.len() != mu.dim() {
            return Err(Error::LengthMismatch {
                lambda: lambda.len(),
                mu: mu.dim(),
            });
        }
        if let Some(index) = lambda.iter().position(|&l| l == 0.0 || !l.is_finite()) {
            return Err(Error::DegenerateLevi { index });
        }
        Ok(Self { lambda, mu, beta })
    }

    /// Diagonal weight `mu = diag(mu_diag)`.
    pub fn diagonal(lambda: &[f64], mu_diag: &[f64]) -> Result<Self> {
        if lambda.len() != mu_diag.len() {
            return Err(Error::LengthMismatch {
                lambda: lambda.len(),
                mu: mu_diag.len(),
            });
        }
        Self::new(
            lambda.to_vec(),
            HermitianForm::from_real_diagonal(mu_diag)?,
            0.0,
        )
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn mu(&self) -> &HermitianForm {
        &self.mu
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn levi_signature(&self) -> LeviSignature {
        let n_minus = self.lambda.iter().filter(|&&l| l < 0.0).count();
        LeviSignature {
            n_minus,
            n_plus: self.dim() - n_minus,
        }
    }

    /// The pencil `eta -> mu + eta * diag(-sqrt(2) lambda)` whose value is `M_{Phi_eta}`.
    pub fn eta_pencil(&self) -> PencilInstance {
        let l: Vec<f64> = self.lambda.iter().map(|&x| -SQRT_2 * x).collect();
        PencilInstance::new(
            self.mu.clone(),
            HermitianForm::from_real_diagonal(&l).expect("lambda is nonempty"),
        )
        .expect("lambda entries are nonzero")
    }

    /// The pointwise pencil `(M, L) = (mu, diag(lambda))` in the variable `s = -sqrt(2) eta`.
    pub fn point_pencil(&self) -> PencilInstance {
        PencilInstance::new(
            self.mu.clone(),
            HermitianForm::from_real_diagonal(&self.lambda).expect("lambda is nonempty"),
        )
        .expect("lambda entries are nonzero")
    }
}

/// `Phi_eta(z) = -sqrt(2) eta sum_j lambda_j |z_j|^2 + sum_{j,t} mu_{jt} conj(z_j) z_t`.
pub fn phi_eta(z: &[Complex64], eta: f64, params: &ModelParams) -> Result<f64> {
    let d = params.dim();
    if z.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "z has {} coordinates, model dimension is {d}",
            z.len()
        )));
    }
    let levi: f64 = z
        .iter()
        .zip(params.lambda())
        .map(|(zj, &l)| l * zj.norm_sqr())
        .sum();
    let mut quad = Complex64::new(0.0, 0.0);
    for j in 0..d {
        for t in 0..d {
            quad += params.mu().entry(j, t) * z[j].conj() * z[t];
        }
    }
    Ok(-SQRT_2 * eta * levi + quad.re)
}

/// `M_{Phi_eta}` with entries `mu_{jt} - sqrt(2) eta lambda_j delta_{jt}`.
pub fn model_matrix(eta: f64, params: &ModelParams) -> HermitianForm {
    let shift: Vec<f64> = params.lambda().iter().map(|&l| -SQRT_2 * eta * l).collect();
    params
        .mu()
        .add_scaled(
            1.0,
            &HermitianForm::from_real_diagonal(&shift).expect("nonempty"),
        )
        .expect("same dimension")
}

/// The set of `eta` where `M_{Phi_eta}` has exactly `q` negative and
/// `dim - q` positive eigenvalues. Intervals are in units of `eta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSignatureSet(pub SignatureSet);

impl ModelSignatureSet {
    pub fn intervals(&self) -> &[Interval] {
        &self.0.intervals
    }

    pub fn contains(&self, eta: f64) -> bool {
        self.0.contains(eta)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn roots(&self) -> &[f64] {
        &self.0.roots
    }
}

pub fn model_signature_set(params: &ModelParams, q: usize) -> Result<ModelSignatureSet> {
    signature_set(&params.eta_pencil(), q).map(ModelSignatureSet)
}

/// `Tr B_{Phi_eta}(z, z) = e^{Phi_eta(z)} (2 pi)^{-dim} |det M_{Phi_eta}| 1_{R_q}(eta)`.
pub fn bergman_trace(z: &[Complex64], eta: f64, params: &ModelParams, q: usize) -> Result<f64> {
    let set = model_signature_set(params, q)?;
    if !set.contains(eta) {
        return Ok(0.0);
    }
    let phi = phi_eta(z, eta, params)?;
    let det = model_matrix(eta, params).det().abs();
    Ok(phi.exp() * det / (2.0 * PI).powi(params.dim() as i32))
}

/// `int_{R_q} |det M_{Phi_eta}| dv(eta)` with `dv(eta) = sqrt(2) d eta`.
pub fn model_integral(params: &ModelParams, q: usize) -> Result<f64> {
    let pencil = params.eta_pencil();
    let set = signature_set(&pencil, q)?;
    Ok(SQRT_2 * integrate_abs_det(&pencil, &set)?)
}

/// `(2 pi)^{-n} int_{R_q} |det M_{Phi_eta}| dv(eta)`, `n = dim + 1`.
pub fn extremal_value(params: &ModelParams, q: usize) -> Result<f64> {
    let n = params.dim() + 1;
    Ok(model_integral(params, q)? / (2.0 * PI).powi(n as i32))
}

/// Both sides of the change of variables `s = -sqrt(2) eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubstitutionCheck {
    /// `int_{R_q} |det M_{Phi_eta}| dv(eta)`, integrated in `eta`.
    pub model_value: f64,
    /// `int_{R_{phi,q}} |det(mu + s diag(lambda))| ds`, integrated in `s`.
    pub pencil_value: f64,
    pub abs_diff: f64,
}

pub fn substitution_check(params: &ModelParams, q: usize) -> Result<SubstitutionCheck> {
    let model_value = model_integral(params, q)?;
    let pencil = params.point_pencil();
    let set = signature_set(&pencil, q)?;
    let pencil_value = integrate_abs_det(&pencil, &set)?;
    Ok(SubstitutionCheck {
        model_value,
        pencil_value,
        abs_diff: (model_value - pencil_value).abs(),
    })
}

/// Squared norm of the explicit harmonic element, by quadrature and in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicNormCheck {
    pub quadrature_value: f64,
    pub closed_form_value: f64,
}

/// Compares `int |alpha(z, eta)|^2 e^{-Phi_eta(z)} dv(z)` against
/// `2 pi (int_{R_q} |det M| dv)^{-1} |det M_{Phi_eta}|` at a fixed `eta`.
///
/// `alpha = C_0 |det M| e^{sum_{nu_j < 0} nu_j |z_j|^2} d conj(z_1) ^ ... ^ d conj(z_q)`
/// with `C_0 = (2 pi)^{1 - n/2} (int_{R_q} |det M| dv)^{-1/2}`. Only diagonal
/// weights are supported: then `M_{Phi_eta}` is already diagonal in the
/// coordinate frame and `nu_j = mu_jj - sqrt(2) eta lambda_j`.
///
/// At a degenerate `eta` (a root of `det M_{Phi_eta}`) both sides vanish and
/// `(0, 0)` is returned; any other `eta` outside `R_q` is an error.
pub fn harmonic_norm_check(params: &ModelParams, q: usize, eta: f64) -> Result<HarmonicNormCheck> {
    if !params.mu().is_diagonal() {
        return Err(Error::NonDiagonalWeight);
    }
    let set = model_signature_set(params, q)?;
    let cluster = 1e-8 * (1.0 + set.0.bound);
    if set.roots().iter().any(|&r| (r - eta).abs() <= cluster) {
        return Ok(HarmonicNormCheck {
            quadrature_value: 0.0,
            closed_form_value: 0.0,
        });
    }
    if !set.contains(eta) {
        return Err(Error::EtaOutsideSet { eta });
    }

    let d = params.dim();
    let n = d + 1;
    let nu: Vec<f64> = params
        .mu()
        .diagonal_real()
        .iter()
        .zip(params.lambda())
        .map(|(&m, &l)| m - SQRT_2 * eta * l)
        .collect();
    let det_abs: f64 = nu.iter().product::<f64>().abs();
    let total = model_integral(params, q)?;

    let closed_form_value = 2.0 * PI * det_abs / total;

    let ln_c0_sq = 2.0 * (1.0 - n as f64 / 2.0) * (2.0 * PI).ln() - total.ln();
    let ln_prefactor = ln_c0_sq + 2.0 * det_abs.ln();
    let rule = GaussLaguerre::new(HARMONIC_QUADRATURE_NODES);
    let scales: Vec<f64> = nu.iter().map(|v| v.abs()).collect();
    let mut z = vec![Complex64::new(0.0, 0.0); d];
    let quadrature_value = radial_tensor_integral(&rule, &scales, |u| {
        for (zj, &uj) in z.iter_mut().zip(u) {
            *zj = Complex64::new(uj.sqrt(), 0.0);
        }
        // |alpha|^2 carries e^{2 nu_j |z_j|^2} for each negative nu_j.
        let ln_alpha_sq: f64 = ln_prefactor
            + nu.iter()
                .zip(u)
                .filter(|(v, _)| **v < 0.0)
                .map(|(v, uj)| 2.0 * v * uj)
                .sum::<f64>();
        let phi = phi_eta(&z, eta, params).expect("dimension matches");
        (ln_alpha_sq - phi).exp()
    });

    Ok(HarmonicNormCheck {
        quadrature_value,
        closed_form_value,
    })
}
