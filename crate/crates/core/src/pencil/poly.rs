//! Real polynomials in the pencil parameter, stored in the monomial basis.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// `det(M + sL)` as a polynomial in `s`; `coefficients[k]` multiplies `s^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetPolynomial {
    pub coefficients: Vec<f64>,
}

impl DetPolynomial {
    pub fn new(coefficients: Vec<f64>) -> Self {
        Self { coefficients }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coefficients.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * s + c)
    }

    /// Sum of `|c_k| |s|^k`, the natural scale for rounding error in `eval(s)`.
    pub fn abs_scale(&self, s: f64) -> f64 {
        let a = s.abs();
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * a + c.abs())
    }

    pub fn derivative(&self) -> DetPolynomial {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect::<Vec<_>>();
        if coefficients.is_empty() {
            DetPolynomial::new(vec![0.0])
        } else {
            DetPolynomial::new(coefficients)
        }
    }

    /// Coefficients of `p(center + u)` as a polynomial in `u`.
    pub fn taylor_shift(&self, center: f64) -> DetPolynomial {
        // Repeated synthetic division (Horner's scheme for every derivative).
        let mut c = self.coefficients.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n - 1).rev() {
                c[k] += center * c[k + 1];
            }
        }
        DetPolynomial::new(c)
    }

    /// Exact integral over `[a, b]`, expanded about the midpoint.
    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let local = self.taylor_shift(mid);
        // Odd powers integrate to zero over a symmetric interval.
        let mut total = 0.0;
        let mut hp = half;
        for (k, &c) in local.coefficients.iter().enumerate() {
            if k % 2 == 0 {
                total += 2.0 * c * hp / (k as f64 + 1.0);
            }
            hp *= half;
        }
        total
    }

    /// Real roots from the eigenvalues of the companion matrix.
    ///
    /// Eigenvalues with `|Im| <= imag_tol` are kept (real part) and Newton-polished.
    pub fn companion_real_roots(&self, imag_tol: f64) -> Vec<f64> {
        let mut coeffs = self.coefficients.clone();
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        let deg = coeffs.len() - 1;
        if deg == 0 {
            return Vec::new();
        }
        let lead = coeffs[deg];
        let comp = DMatrix::from_fn(deg, deg, |i, j| {
            if i == 0 {
                -coeffs[deg - 1 - j] / lead
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let mut roots: Vec<f64> = comp
            .complex_eigenvalues()
            .iter()
            .filter(|z| z.im.abs() <= imag_tol)
            .map(|z| self.newton_polish(z.re, 1e-12, 50))
            .collect();
        roots.sort_by(f64::total_cmp);
        roots
    }

    /// Newton iteration that only accepts steps reducing `|p|`.
    pub fn newton_polish(&self, mut s: f64, residual_tol: f64, max_iter: usize) -> f64 {
        let dp = self.derivative();
        let mut val = self.eval(s);
        for _ in 0..max_iter {
            let scale = self.abs_scale(s).max(f64::MIN_POSITIVE);
            if val.abs() <= residual_tol * scale {
                break;
            }
            let d = dp.eval(s);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let next = s - val / d;
            let next_val = self.eval(next);
            if next_val.is_nan() || next_val.abs() >= val.abs() {
                break;
            }
            s = next;
            val = next_val;
        }
        s
    }

    /// Interpolates a polynomial of the given degree through `(t_k, y_k)` pairs.
    pub(crate) fn interpolate(nodes: &[f64], values: &[f64]) -> Option<Vec<f64>> {
        let n = nodes.len();
        let vander = DMatrix::from_fn(n, n, |i, k| nodes[i].powi(k as i32));
        let rhs = DVector::from_column_slice(values);
        vander.lu().solve(&rhs).map(|v| v.iter().copied().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_integrate_quadratic() {
        // 1 - s^2
        let p = DetPolynomial::new(vec![1.0, 0.0, -1.0]);
        assert_eq!(p.eval(2.0), -3.0);
        assert!((p.integrate(-1.0, 1.0) - 4.0 / 3.0).abs() < 1e-15);
        assert!((p.integrate(0.0, 1.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let p = DetPolynomial::new(vec![0.3, -1.2, 2.0, 0.7, -0.1]);
        let q = p.taylor_shift(1.7);
        for u in [-2.0, -0.3, 0.0, 0.9, 3.1] {
            assert!((q.eval(u) - p.eval(1.7 + u)).abs() < 1e-12);
        }
    }

    #[test]
    fn companion_roots_of_product() {
        // (s - 1)(s + 2)(s - 0.5) and a complex pair s^2 + 1
        let p = DetPolynomial::new(vec![1.0, -2.5, 0.5, 1.0]);
        let p = mul(&p, &DetPolynomial::new(vec![1.0, 0.0, 1.0]));
        let roots = p.companion_real_roots(1e-8);
        assert_eq!(roots.len(), 3);
        for (r, e) in roots.iter().zip([-2.0, 0.5, 1.0]) {
            assert!((r - e).abs() < 1e-12, "{r} vs {e}");
        }
    }

    fn mul(a: &DetPolynomial, b: &DetPolynomial) -> DetPolynomial {
        let mut c = vec![0.0; a.coefficients.len() + b.coefficients.len() - 1];
        for (i, x) in a.coefficients.iter().enumerate() {
            for (j, y) in b.coefficients.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        DetPolynomial::new(c)
    }
}
