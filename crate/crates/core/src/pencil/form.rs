//! Hermitian forms in a fixed frame and their spectral data.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A Hermitian form on `C^dim`, stored as its matrix in a fixed frame.
///
/// Construction symmetrizes the input, so `entries[j][t] == conj(entries[t][j])`
/// holds bit-for-bit afterwards and the diagonal is real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianForm {
    mat: DMatrix<Complex64>,
}

/// Eigenvalue sign counts `(neg, zero, pos)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub neg: usize,
    pub zero: usize,
    pub pos: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.neg + self.zero + self.pos
    }
}

impl HermitianForm {
    /// Builds a form from a square matrix, replacing it by `(A + A^*) / 2`.
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian form must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.nrows() == 0 {
            return Err(Error::DimensionMismatch(
                "Hermitian form of dimension 0".into(),
            ));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        let n = mat.nrows();
        let sym = DMatrix::from_fn(n, n, |j, t| {
            let a = mat[(j, t)];
            let b = mat[(t, j)];
            Complex64::new((a.re + b.re) / 2.0, (a.im - b.im) / 2.0)
        });
        Ok(Self { mat: sym })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} entries, expected {n}",
                rows[bad].len()
            )));
        }
        Self::new(DMatrix::from_fn(n, n, |j, t| rows[j][t]))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::new(DMatrix::from_fn(n, n, |j, t| {
            if j == t {
                Complex64::new(diag[j], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn entry(&self, j: usize, t: usize) -> Complex64 {
        self.mat[(j, t)]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|j| (0..self.dim()).map(|t| self.mat[(j, t)]).collect())
            .collect()
    }

    /// Largest absolute deviation from exact Hermitian symmetry.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for j in 0..n {
            for t in 0..n {
                worst = worst.max((self.mat[(j, t)] - self.mat[(t, j)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|t| j == t || self.mat[(j, t)] == Complex64::new(0.0, 0.0)))
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.mat[(j, j)].re).collect()
    }

    /// `self + t * other`.
    pub fn add_scaled(&self, t: f64, other: &HermitianForm) -> Result<Self> {
        self.check_same_dim(other)?;
        Self::new(&self.mat + other.mat.map(|z| z * t))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            mat: self.mat.map(|z| z * c),
        }
    }

    /// Congruence `P^* H P`.
    pub fn congruence(&self, p: &DMatrix<Complex64>) -> Result<Self> {
        if p.nrows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "congruence matrix has {} rows, form has dimension {}",
                p.nrows(),
                self.dim()
            )));
        }
        Self::new(p.adjoint() * &self.mat * p)
    }

    /// Ascending real eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self)
    }

    /// Spectral norm (largest absolute eigenvalue).
    pub fn norm2(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Smallest absolute eigenvalue (smallest singular value of a Hermitian matrix).
    pub fn sigma_min(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .fold(f64::INFINITY, |m, v| m.min(v.abs()))
    }

    /// Determinant; real for Hermitian input.
    pub fn det(&self) -> f64 {
        self.mat.clone().lu().determinant().re
    }

    pub fn inertia(&self, tol: f64) -> Inertia {
        inertia(self, tol)
    }

    /// Inertia with the default tolerance `1e-10 * ||H||_2`.
    pub fn inertia_default(&self) -> Inertia {
        let eigs = self.eigenvalues();
        let scale = eigs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        count_signs(&eigs, 1e-10 * scale)
    }

    fn check_same_dim(&self, other: &HermitianForm) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "forms have dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }
}

/// Ascending eigenvalues of a Hermitian form.
pub fn hermitian_eigenvalues(h: &HermitianForm) -> Vec<f64> {
    let mut eigs: Vec<f64> = SymmetricEigen::new(h.mat.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

/// Counts eigenvalues below `-tol`, within `[-tol, tol]`, and above `tol`.
pub fn inertia(h: &HermitianForm, tol: f64) -> Inertia {
    count_signs(&hermitian_eigenvalues(h), tol.max(0.0))
}

fn count_signs(eigs: &[f64], tol: f64) -> Inertia {
    let mut out = Inertia {
        neg: 0,
        zero: 0,
        pos: 0,
    };
    for &v in eigs {
        if v < -tol {
            out.neg += 1;
        } else if v > tol {
            out.pos += 1;
        } else {
            out.zero += 1;
        }
    }
    out
}

/// Wire form of a complex matrix: rows of `[re, im]` pairs.
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

impl HermitianForm {
    pub fn to_complex_rows(&self) -> ComplexRows {
        self.rows()
            .into_iter()
            .map(|r| r.into_iter().map(|z| [z.re, z.im]).collect())
            .collect()
    }

    pub fn from_complex_rows(rows: &ComplexRows) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|p| Complex64::new(p[0], p[1])).collect())
            .collect();
        Self::from_rows(&rows)
    }
}

impl Serialize for HermitianForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_complex_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HermitianForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = ComplexRows::deserialize(deserializer)?;
        HermitianForm::from_complex_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues() {
        assert_eq!(
            HermitianForm::identity(3).eigenvalues(),
            vec![1.0, 1.0, 1.0]
        );
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let h = HermitianForm::from_real_diagonal(&[1.0, -1.0]).unwrap();
        assert_eq!(h.eigenvalues(), vec![-1.0, 1.0]);
    }

    #[test]
    fn constructor_symmetrizes_exactly() {
        let h = HermitianForm::from_rows(&[
            vec![c(1.0, 0.3), c(2.0, 1.0)],
            vec![c(1.5, -0.7), c(-3.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(h.max_asymmetry(), 0.0);
        assert_eq!(h.entry(0, 0).im, 0.0);
    }

    #[test]
    fn inertia_examples() {
        let i4 = HermitianForm::identity(4).inertia(1e-12);
        assert_eq!((i4.neg, i4.zero, i4.pos), (0, 0, 4));
        let d = HermitianForm::from_real_diagonal(&[-2.0, 0.0, 3.0]).unwrap();
        let i = d.inertia(1e-12);
        assert_eq!((i.neg, i.zero, i.pos), (1, 1, 1));
    }

    #[test]
    fn rejects_non_square_and_empty() {
        assert!(HermitianForm::new(DMatrix::zeros(2, 3)).is_err());
        assert!(HermitianForm::new(DMatrix::zeros(0, 0)).is_err());
    }

    #[test]
    fn determinant_of_diagonal() {
        let h = HermitianForm::from_real_diagonal(&[2.0, -3.0, 0.5]).unwrap();
        assert!((h.det() + 3.0).abs() < 1e-14);
    }
}
