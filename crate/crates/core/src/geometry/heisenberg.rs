use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ManifoldSpec, PointSample};
use crate::error::{Error, Result};
use crate::pencil::PencilInstance;

pub(super) fn check_entries(lambda: &[i64], mu: &[i64]) -> Result<()> {
    if lambda.len() != mu.len() {
        return Err(Error::LengthMismatch {
            lambda: lambda.len(),
            mu: mu.len(),
        });
    }
    if lambda.is_empty() {
        return Err(Error::InvalidArgument(
            "lambda and mu must be nonempty".into(),
        ));
    }
    if let Some(index) = lambda.iter().position(|&l| l == 0) {
        return Err(Error::ZeroEntry {
            which: "lambda",
            index,
        });
    }
    if let Some(index) = mu.iter().position(|&m| m == 0) {
        return Err(Error::ZeroEntry { which: "mu", index });
    }
    Ok(())
}

/// Riemannian volume density of the coordinates `(x_1, y_1, ..., theta)` at `z`.
///
/// The coordinate vectors are written in the orthonormal frame
/// `{Z_j = d/dz_j - i lambda_j conj(z_j) d/dtheta, conj(Z_j), d/dtheta}`:
/// `d/dx_j = Z_j + conj(Z_j) + 2 lambda_j y_j d/dtheta` and
/// `d/dy_j = i Z_j - i conj(Z_j) - 2 lambda_j x_j d/dtheta`.
/// The density is the square root of their Gram determinant.
pub fn heisenberg_volume_density(lambda: &[f64], z: &[Complex64]) -> f64 {
    let d = lambda.len();
    let size = 2 * d + 1;
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    // Row a: coordinate vector a; column k: coefficient on frame vector k
    // (frame order Z_1, conj Z_1, ..., Z_d, conj Z_d, d/dtheta).
    let mut c = DMatrix::<Complex64>::zeros(size, size);
    for j in 0..d {
        let (x, y) = (z[j].re, z[j].im);
        c[(2 * j, 2 * j)] = one;
        c[(2 * j, 2 * j + 1)] = one;
        c[(2 * j, 2 * d)] = Complex64::new(2.0 * lambda[j] * y, 0.0);
        c[(2 * j + 1, 2 * j)] = i;
        c[(2 * j + 1, 2 * j + 1)] = -i;
        c[(2 * j + 1, 2 * d)] = Complex64::new(-2.0 * lambda[j] * x, 0.0);
    }
    c[(2 * d, 2 * d)] = one;
    let gram = &c * c.adjoint();
    gram.lu().determinant().re.sqrt()
}

/// Volume of the fundamental domain `z_j in sqrt(2 pi) [0, 1)^2`, `theta in [0, pi)`.
pub fn heisenberg_volume(lambda: &[f64]) -> f64 {
    let d = lambda.len();
    let side = (2.0 * PI).sqrt();
    let center = vec![Complex64::new(0.5 * side, 0.5 * side); d];
    let density = heisenberg_volume_density(lambda, &center);
    density * (2.0 * PI).powi(d as i32) * PI
}

/// Additive recurrence `frac(k * alpha)` with `alpha_j = phi_d^{-(j+1)}`,
/// `phi_d` the positive root of `x^{d+1} = x + 1`.
fn low_discrepancy_point(k: usize, dims: usize) -> Vec<f64> {
    let mut g = 2.0_f64;
    for _ in 0..64 {
        g = (1.0 + g).powf(1.0 / (dims as f64 + 1.0));
    }
    (0..dims)
        .map(|j| (0.5 + k as f64 * g.powi(-(j as i32 + 1))).fract())
        .collect()
}

/// The compact Heisenberg group with Levi form `diag(lambda)` and weight
/// `phi = sum mu_j |z_j|^2`, sampled at `n_samples` equal-weight points.
pub fn heisenberg_spec(lambda: &[i64], mu: &[i64], n_samples: usize) -> Result<ManifoldSpec> {
    check_entries(lambda, mu)?;
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be positive".into()));
    }
    let l: Vec<f64> = lambda.iter().map(|&x| x as f64).collect();
    let m: Vec<f64> = mu.iter().map(|&x| x as f64).collect();
    let pencil = PencilInstance::diagonal(&m, &l)?;
    let d = l.len();
    let volume = heisenberg_volume(&l);
    let weight = volume / n_samples as f64;
    let side = (2.0 * PI).sqrt();

    let samples = (0..n_samples)
        .map(|k| {
            let u = low_discrepancy_point(k, 2 * d + 1);
            let mut coords: Vec<f64> = u[..2 * d].iter().map(|v| v * side).collect();
            coords.push(u[2 * d] * PI);
            PointSample {
                id: format!("h{k}"),
                coords,
                pencil: pencil.clone(),
                dm_weight: weight,
            }
        })
        .collect();

    let mut metadata = BTreeMap::new();
    metadata.insert(
        "metric".into(),
        "orthonormal frame {d/dz_j - i lambda_j conj(z_j) d/dtheta, conjugates, d/dtheta}".into(),
    );
    metadata.insert(
        "domain".into(),
        "z_j in sqrt(2 pi)[0,1)^2, theta in [0, pi)".into(),
    );
    metadata.insert("volume".into(), format!("{volume:?}"));
    metadata.insert(
        "sampling".into(),
        format!("{n_samples} low-discrepancy points, equal weights volume/{n_samples}"),
    );
    Ok(ManifoldSpec {
        name: "heisenberg".into(),
        n: d + 1,
        samples,
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_is_two_to_the_d() {
        let l = [-1.0, 3.0];
        for z in [
            vec![Complex64::new(0.0, 0.0); 2],
            vec![Complex64::new(1.3, -0.4), Complex64::new(2.0, 0.7)],
        ] {
            assert!((heisenberg_volume_density(&l, &z) - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn volume_of_five_manifold() {
        // 2^2 * (2 pi)^2 * pi
        let v = heisenberg_volume(&[-1.0, 1.0]);
        assert!((v - 16.0 * PI.powi(3)).abs() < 1e-10);
    }

    #[test]
    fn samples_lie_in_domain() {
        let spec = heisenberg_spec(&[-1, 1], &[1, 1], 500).unwrap();
        spec.validate().unwrap();
        let side = (2.0 * PI).sqrt();
        for s in &spec.samples {
            assert!(s.coords[..4].iter().all(|&c| (0.0..side).contains(&c)));
            assert!((0.0..PI).contains(&s.coords[4]));
        }
    }

    #[test]
    fn input_errors() {
        assert!(matches!(
            heisenberg_spec(&[1, 2], &[1], 1),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            heisenberg_spec(&[1, 0], &[1, 1], 1),
            Err(Error::ZeroEntry {
                which: "lambda",
                index: 1
            })
        ));
        assert!(matches!(
            heisenberg_spec(&[1, 1], &[0, 1], 1),
            Err(Error::ZeroEntry {
                which: "mu",
                index: 0
            })
        ));
    }
}
