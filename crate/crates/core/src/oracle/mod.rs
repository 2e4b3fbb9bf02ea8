//! Brute-force validators. The inertia, determinant and norm computations here
//! use their own routines ([`linalg`]) rather than the pencil layer's.

pub mod instances;
pub mod linalg;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ManifoldSpec;
use crate::pencil::{Inertia, Interval, PencilInstance};
use crate::quadrature::{radial_tensor_integral, GaussLaguerre};
use crate::sum::pairwise_sum;

pub const MIN_GRID_POINTS: usize = 1000;
pub const MIN_MC_DRAWS: usize = 100;

fn flat(p: &PencilInstance) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = p.dim();
    let grab = |m: &nalgebra::DMatrix<Complex64>| {
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)])
            .collect::<Vec<_>>()
    };
    (grab(p.m().matrix()), grab(p.l().matrix()))
}

/// `||M||_2 / sigma_min(L)` from Jacobi spectra of the realified matrices.
pub fn oracle_root_bound(p: &PencilInstance) -> f64 {
    let n = p.dim();
    let (m, l) = flat(p);
    let em = linalg::jacobi_eigenvalues(linalg::realify(&m, n), 2 * n);
    let el = linalg::jacobi_eigenvalues(linalg::realify(&l, n), 2 * n);
    let norm_m = em.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let sigma = el.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    norm_m / sigma
}

/// Inertia and `|det|` of `M + sL`.
pub fn oracle_inertia_det(m: &[Complex64], l: &[Complex64], n: usize, s: f64) -> (Inertia, f64) {
    let mut a: Vec<Complex64> = m.iter().zip(l).map(|(x, y)| x + y * s).collect();
    let t = linalg::tridiagonalize(&mut a, n);
    let (neg, zero, pos) = t.inertia(1e-10 * t.radius_bound());
    (Inertia { neg, zero, pos }, t.det().abs())
}

/// Uniform-grid inertia scan of a pencil.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridScanResult {
    pub s_values: Vec<f64>,
    pub inertias: Vec<Inertia>,
    pub riemann_integral: f64,
    pub step: f64,
}

impl GridScanResult {
    /// Maximal runs of grid cells whose inertia is `(q, 0, dim - q)`, widened
    /// to the cell boundaries.
    pub fn runs(&self, q: usize, dim: usize) -> Vec<Interval> {
        let target = Inertia {
            neg: q,
            zero: 0,
            pos: dim - q,
        };
        let half = 0.5 * self.step;
        let mut out = Vec::new();
        let mut start: Option<usize> = None;
        for (i, inertia) in self.inertias.iter().enumerate() {
            match (*inertia == target, start) {
                (true, None) => start = Some(i),
                (false, Some(b)) => {
                    out.push(Interval {
                        lo: self.s_values[b] - half,
                        hi: self.s_values[i - 1] + half,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(b) = start {
            out.push(Interval {
                lo: self.s_values[b] - half,
                hi: self.s_values[self.s_values.len() - 1] + half,
            });
        }
        out
    }
}

/// Midpoint grid of `n_points` cells on `[-R-1, R+1]`; at each node the
/// inertia of `M + sL` is computed, and `|det|` is summed over nodes with
/// inertia `(q, 0, dim - q)`.
pub fn grid_signature_scan(
    p: &PencilInstance,
    q: usize,
    n_points: usize,
) -> Result<GridScanResult> {
    if n_points < MIN_GRID_POINTS {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least {MIN_GRID_POINTS} points, got {n_points}"
        )));
    }
    let n = p.dim();
    if q > n {
        return Err(Error::QOutOfRange { q, dim: n });
    }
    let r = oracle_root_bound(p);
    let (lo, hi) = (-r - 1.0, r + 1.0);
    let step = (hi - lo) / n_points as f64;
    let (m, l) = flat(p);
    let target = Inertia {
        neg: q,
        zero: 0,
        pos: n - q,
    };
    let rows: Vec<(f64, Inertia, f64)> = (0..n_points)
        .into_par_iter()
        .map(|i| {
            let s = lo + (i as f64 + 0.5) * step;
            let (inertia, det) = oracle_inertia_det(&m, &l, n, s);
            (s, inertia, if inertia == target { det } else { 0.0 })
        })
        .collect();
    let values: Vec<f64> = rows.iter().map(|r| r.2).collect();
    Ok(GridScanResult {
        s_values: rows.iter().map(|r| r.0).collect(),
        inertias: rows.iter().map(|r| r.1).collect(),
        riemann_integral: step * pairwise_sum(&values),
        step,
    })
}

/// Monte-Carlo estimate of the global integral: `n_draws` sample indices drawn
/// uniformly, each contributing `N * dm_weight * f(x)` with `f` the pointwise
/// `|det|` integral. Returns `(estimate, standard error)`.
pub fn mc_integral(spec: &ManifoldSpec, q: usize, n_draws: usize, seed: u64) -> Result<(f64, f64)> {
    if n_draws < MIN_MC_DRAWS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_MC_DRAWS} draws, got {n_draws}"
        )));
    }
    let terms = crate::bounds::sample_terms(spec, q)?;
    let count = terms.len() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Welford running mean and sum of squared deviations.
    let (mut mean, mut m2) = (0.0, 0.0);
    for k in 0..n_draws {
        let x = count * terms[rng.random_range(0..terms.len())];
        let delta = x - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (x - mean);
    }
    let variance = m2 / (n_draws - 1) as f64;
    Ok((mean, (variance / n_draws as f64).sqrt()))
}

/// `int_{C^d} exp(sum_j a_j |z_j|^2) dv(z)` by tensor Gauss-Laguerre with
/// `dv = 2^d dx dy`; the exact value is `prod_j 2 pi / |a_j|`.
pub fn gaussian_norm_quadrature(exponents: &[f64]) -> Result<f64> {
    if let Some((index, &value)) = exponents
        .iter()
        .enumerate()
        .find(|(_, a)| !a.is_finite() || **a >= 0.0)
    {
        return Err(Error::NonNegativeExponent { index, value });
    }
    let scales: Vec<f64> = exponents.iter().map(|a| -a).collect();
    let rule = GaussLaguerre::new(32);
    Ok(radial_tensor_integral(&rule, &scales, |u| {
        exponents
            .iter()
            .zip(u)
            .map(|(a, x)| a * x)
            .sum::<f64>()
            .exp()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_fixture() {
        let p = PencilInstance::diagonal(&[1.0, 1.0], &[1.0, -1.0]).unwrap();
        let g = grid_signature_scan(&p, 0, 100_000).unwrap();
        assert!((g.riemann_integral - 4.0 / 3.0).abs() < 1e-3);
        let runs = g.runs(0, 2);
        assert_eq!(runs.len(), 1);
        assert!((runs[0].lo + 1.0).abs() <= 2.0 * g.step);
        assert!((runs[0].hi - 1.0).abs() <= 2.0 * g.step);
    }

    #[test]
    fn grid_empty_set() {
        let p = PencilInstance::diagonal(&[-1.0, 1.0], &[-1.0, 1.0]).unwrap();
        assert_eq!(
            grid_signature_scan(&p, 0, 2000).unwrap().riemann_integral,
            0.0
        );
        assert!(grid_signature_scan(&p, 0, 999).is_err());
    }

    #[test]
    fn root_bound_matches() {
        let p = PencilInstance::diagonal(&[3.0, -1.0], &[0.5, -2.0]).unwrap();
        assert!((oracle_root_bound(&p) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_examples() {
        assert!((gaussian_norm_quadrature(&[-1.0]).unwrap() - 2.0 * PI).abs() < 1e-12);
        let v = gaussian_norm_quadrature(&[-1.0, -2.0]).unwrap();
        assert!((v - 2.0 * PI * PI).abs() < 1e-10 * v);
        let w = gaussian_norm_quadrature(&[-2.0, -4.0]).unwrap();
        assert!((w - v / 4.0).abs() < 1e-10 * v);
        assert!(matches!(
            gaussian_norm_quadrature(&[-1.0, 0.0]),
            Err(Error::NonNegativeExponent { index: 1, .. })
        ));
    }

    #[test]
    fn mc_on_constant_integrand() {
        let spec = crate::geometry::heisenberg_spec(&[-1, 1], &[1, 1], 50).unwrap();
        let exact = crate::bounds::global_integral(&spec, 0).unwrap();
        let (est, se) = mc_integral(&spec, 0, 500, 3).unwrap();
        assert!((est - exact).abs() <= 1e-12 * exact);
        assert_eq!(se, 0.0);
        assert_eq!(mc_integral(&spec, 0, 500, 3).unwrap(), (est, se));
    }
}
