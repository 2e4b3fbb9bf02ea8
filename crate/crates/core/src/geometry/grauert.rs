use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::heisenberg::check_entries;
use super::{ManifoldSpec, PointSample};
use crate::error::{Error, Result};
use crate::pencil::{HermitianForm, PencilInstance};

/// Lattice over the centered torus chart `sqrt(2 pi) [-1/2, 1/2)^2` per
/// coordinate: `per_axis` cells on each of the `2n` real
/// base axes, `fiber` cells on the circle fiber. Points sit at cell centers
/// unless `jitter_seed` is set, in which case each point is drawn uniformly
/// inside its cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrauertGrid {
    pub per_axis: usize,
    pub fiber: usize,
    pub jitter_seed: Option<u64>,
}

impl GrauertGrid {
    /// The grid whose sample count `per_axis^{2 n_base}` is closest to `target`.
    pub fn with_samples(n_base: usize, target: usize) -> Self {
        let per_axis = (target.max(1) as f64)
            .powf(1.0 / (2 * n_base) as f64)
            .round()
            .max(1.0) as usize;
        Self {
            per_axis,
            fiber: 1,
            jitter_seed: None,
        }
    }

    pub fn sample_count(&self, n_base: usize) -> usize {
        self.per_axis.pow(2 * n_base as u32) * self.fiber
    }

    /// Twice as many cells per base axis.
    pub fn refined(&self) -> Self {
        Self {
            per_axis: 2 * self.per_axis,
            ..*self
        }
    }
}

/// `||dr||` for `r = |xi|^2 exp(sum lambda_j |z_j|^2) - 1` on `X`, in the flat
/// metric where `d/dz_j` and `d/dxi` are orthonormal.
///
/// For this metric a real function has `||df||^2 = 2 sum_k |df/dw_k|^2`, and on
/// `X` one has `|dr/dz_j| = |lambda_j z_j|`, `|dr/dxi|^2 = exp(sum lambda_j |z_j|^2)`.
pub fn grauert_dr_norm(lambda: &[f64], z: &[Complex64]) -> f64 {
    let s: f64 = lambda.iter().zip(z).map(|(l, zj)| l * zj.norm_sqr()).sum();
    let base: f64 = lambda
        .iter()
        .zip(z)
        .map(|(l, zj)| l * l * zj.norm_sqr())
        .sum();
    SQRT_2 * (base + s.exp()).sqrt()
}

/// Volume density of the parametrization `(x, y, phi) -> (z, rho(z) e^{i phi})`,
/// `rho = exp(-sum lambda_j |z_j|^2 / 2)`, in the flat ambient metric
/// (twice the Euclidean metric of the real coordinates).
pub fn grauert_volume_density(lambda: &[f64], z: &[Complex64], phi: f64) -> f64 {
    let d = lambda.len();
    let s: f64 = lambda.iter().zip(z).map(|(l, zj)| l * zj.norm_sqr()).sum();
    let rho = (-0.5 * s).exp();
    let (c, sn) = (phi.cos(), phi.sin());
    let rows = 2 * d + 2;
    let cols = 2 * d + 1;
    let mut jac = DMatrix::<f64>::zeros(rows, cols);
    for j in 0..d {
        let (x, y) = (z[j].re, z[j].im);
        let drho_dx = -rho * lambda[j] * x;
        let drho_dy = -rho * lambda[j] * y;
        jac[(2 * j, 2 * j)] = 1.0;
        jac[(2 * j + 1, 2 * j + 1)] = 1.0;
        jac[(2 * d, 2 * j)] = drho_dx * c;
        jac[(2 * d + 1, 2 * j)] = drho_dx * sn;
        jac[(2 * d, 2 * j + 1)] = drho_dy * c;
        jac[(2 * d + 1, 2 * j + 1)] = drho_dy * sn;
    }
    jac[(2 * d, 2 * d)] = -rho * sn;
    jac[(2 * d + 1, 2 * d)] = rho * c;
    let gram = jac.transpose() * &jac * 2.0;
    gram.determinant().sqrt()
}

/// The circle bundle `X = {|v| = 1}` in the dual of the line bundle with
/// curvature `diag(lambda)` over the flat torus `C^n / sqrt(2 pi)(Z^n + i Z^n)`,
/// with the pulled-back weight `sum mu_j |z_j|^2`.
///
/// Per sample: `M = diag(mu)`, `L = diag(lambda) / ||dr||`. The resulting
/// manifold has `n = len(lambda) + 1`.
pub fn grauert_tube_spec(lambda: &[i64], mu: &[i64], grid: &GrauertGrid) -> Result<ManifoldSpec> {
    check_entries(lambda, mu)?;
    if let Some(index) = lambda.windows(2).position(|w| w[0] > 0 && w[1] < 0) {
        return Err(Error::SignPatternViolation { index: index + 1 });
    }
    if grid.per_axis == 0 || grid.fiber == 0 {
        return Err(Error::InvalidArgument(
            "grid needs at least one cell per axis".into(),
        ));
    }
    let l: Vec<f64> = lambda.iter().map(|&x| x as f64).collect();
    let m = HermitianForm::from_real_diagonal(&mu.iter().map(|&x| x as f64).collect::<Vec<_>>())?;
    let d = l.len();
    let side = (2.0 * PI).sqrt();
    let h = side / grid.per_axis as f64;
    let h_phi = 2.0 * PI / grid.fiber as f64;
    let cell = h.powi(2 * d as i32) * h_phi;

    let mut rng = grid.jitter_seed.map(ChaCha8Rng::seed_from_u64);
    let offset = |rng: &mut Option<ChaCha8Rng>| match rng {
        Some(r) => r.random::<f64>(),
        None => 0.5,
    };

    let total = grid.sample_count(d);
    let mut samples = Vec::with_capacity(total);
    let mut idx = vec![0usize; 2 * d];
    for k in 0..total {
        let mut rem = k / grid.fiber;
        for slot in idx.iter_mut() {
            *slot = rem % grid.per_axis;
            rem /= grid.per_axis;
        }
        let mut coords: Vec<f64> = idx
            .iter()
            .map(|&i| (i as f64 + offset(&mut rng)) * h - 0.5 * side)
            .collect();
        let phi = ((k % grid.fiber) as f64 + offset(&mut rng)) * h_phi;
        let z: Vec<Complex64> = (0..d)
            .map(|j| Complex64::new(coords[2 * j], coords[2 * j + 1]))
            .collect();
        let norm = grauert_dr_norm(&l, &z);
        let levi: Vec<f64> = l.iter().map(|x| x / norm).collect();
        let pencil = PencilInstance::new(m.clone(), HermitianForm::from_real_diagonal(&levi)?)?;
        coords.push(phi);
        samples.push(PointSample {
            id: format!("g{k}"),
            coords,
            pencil,
            dm_weight: grauert_volume_density(&l, &z, phi) * cell,
        });
    }

    let mut metadata = BTreeMap::new();
    metadata.insert(
        "metric".into(),
        "flat chart metric with d/dz_j and d/dxi orthonormal; integrals are metric-relative".into(),
    );
    metadata.insert(
        "levi_identification".into(),
        "L = diag(lambda)/||dr|| on the n base directions".into(),
    );
    metadata.insert(
        "domain".into(),
        "z_j in sqrt(2 pi)[-1/2,1/2)^2, fiber angle in [0, 2 pi)".into(),
    );
    metadata.insert(
        "grid".into(),
        format!(
            "per_axis={}, fiber={}, samples={}, jitter={}",
            grid.per_axis,
            grid.fiber,
            total,
            grid.jitter_seed
                .map_or_else(|| "none".to_string(), |s| format!("seed {s}"))
        ),
    );
    metadata.insert(
        "refinement".into(),
        format!(
            "midpoint lattice; next refinement per_axis={} ({} samples)",
            2 * grid.per_axis,
            grid.refined().sample_count(d)
        ),
    );
    Ok(ManifoldSpec {
        name: "grauert-tube".into(),
        n: d + 1,
        samples,
        metadata,
    })
}
