//! Small dense routines for the oracles: Householder tridiagonalization with
//! Sturm counts for inertia, the tridiagonal continuant for determinants, and
//! cyclic Jacobi for real symmetric spectra.

use num_complex::Complex64;

/// Real symmetric tridiagonal matrix unitarily similar to a Hermitian input.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    /// Absolute values of the subdiagonal.
    pub off: Vec<f64>,
}

/// Householder reduction of a Hermitian matrix stored row-major in `a`.
///
/// The complex subdiagonal is replaced by its modulus, which is a further
/// diagonal unitary similarity.
pub fn tridiagonalize(a: &mut [Complex64], n: usize) -> Tridiagonal {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x0 = a[(k + 1) * n + k];
        let xnorm = (k + 1..n)
            .map(|i| a[i * n + k].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        for i in 0..m {
            v[i] = a[(k + 1 + i) * n + k];
        }
        v[0] -= alpha;
        let vnorm = v[..m].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v[..m].iter_mut().for_each(|c| *c /= vnorm);

        // Trailing block B <- H B H with H = I - 2 v v^*:
        // B - 2 v w^* - 2 w v^*, p = B v, w = p - (v^* p) v.
        for (i, pi) in p[..m].iter_mut().enumerate() {
            let row = (k + 1 + i) * n + k + 1;
            *pi = (0..m).map(|j| a[row + j] * v[j]).sum();
        }
        let kappa: Complex64 = (0..m).map(|i| v[i].conj() * p[i]).sum();
        for i in 0..m {
            p[i] -= kappa * v[i];
        }
        for i in 0..m {
            let row = (k + 1 + i) * n + k + 1;
            for j in 0..m {
                a[row + j] -= 2.0 * (v[i] * p[j].conj() + p[i] * v[j].conj());
            }
        }
        a[(k + 1) * n + k] = alpha;
        a[k * n + k + 1] = alpha.conj();
        for i in k + 2..n {
            a[i * n + k] = Complex64::new(0.0, 0.0);
            a[k * n + i] = Complex64::new(0.0, 0.0);
        }
    }
    Tridiagonal {
        diag: (0..n).map(|i| a[i * n + i].re).collect(),
        off: (0..n.saturating_sub(1))
            .map(|i| a[(i + 1) * n + i].norm())
            .collect(),
    }
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x`, from the signs of the `LDL^T` pivots.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let b2 = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1]
            };
            d = (self.diag[i] - x) - b2 / d;
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + x.abs() + f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin bound on the spectral radius.
    pub fn radius_bound(&self) -> f64 {
        (0..self.diag.len())
            .map(|i| {
                let left = if i > 0 { self.off[i - 1] } else { 0.0 };
                let right = self.off.get(i).copied().unwrap_or(0.0);
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// `(neg, zero, pos)` with eigenvalues in `[-tol, tol]` counted as zero.
    pub fn inertia(&self, tol: f64) -> (usize, usize, usize) {
        let neg = self.count_below(-tol);
        let not_pos = self.count_below(tol.max(f64::MIN_POSITIVE));
        (neg, not_pos - neg, self.diag.len() - not_pos)
    }

    /// Determinant by the three-term continuant recurrence.
    pub fn det(&self) -> f64 {
        let (mut prev, mut cur) = (1.0, 1.0);
        for i in 0..self.diag.len() {
            let b2 = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1]
            };
            let next = self.diag[i] * cur - b2 * prev;
            prev = cur;
            cur = next;
        }
        cur
    }
}

/// Eigenvalues of a real symmetric matrix (row-major) by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        let total: f64 = a.iter().map(|x| x * x).sum();
        if off <= 1e-30 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// The real `2n x 2n` matrix `[[Re H, -Im H], [Im H, Re H]]`; its spectrum is
/// that of `H` with every eigenvalue doubled.
pub fn realify(h: &[Complex64], n: usize) -> Vec<f64> {
    let m = 2 * n;
    let mut r = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[i * n + j];
            r[i * m + j] = z.re;
            r[i * m + n + j] = -z.im;
            r[(n + i) * m + j] = z.im;
            r[(n + i) * m + n + j] = z.re;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tridiagonal_keeps_spectrum() {
        // Hermitian 3x3 with eigenvalues computable from its realification.
        let h = vec![
            c(2.0, 0.0),
            c(1.0, 1.0),
            c(0.0, -0.5),
            c(1.0, -1.0),
            c(-1.0, 0.0),
            c(0.3, 0.2),
            c(0.0, 0.5),
            c(0.3, -0.2),
            c(0.5, 0.0),
        ];
        let eig = jacobi_eigenvalues(realify(&h, 3), 6);
        let mut a = h.clone();
        let t = tridiagonalize(&mut a, 3);
        let prod: f64 = eig.iter().step_by(2).product();
        assert!((t.det() - prod).abs() < 1e-12);
        for (k, e) in eig.iter().step_by(2).enumerate() {
            assert_eq!(t.count_below(e - 1e-9), k);
            assert_eq!(t.count_below(e + 1e-9), k + 1);
        }
    }

    #[test]
    fn inertia_counts() {
        let t = Tridiagonal {
            diag: vec![-1.0, 0.0, 2.0],
            off: vec![0.0, 0.0],
        };
        assert_eq!(t.inertia(1e-12), (1, 1, 1));
        assert_eq!(t.det(), 0.0);
    }
}
