//! Seeded random test instances.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::model::ModelParams;
use crate::pencil::{HermitianForm, PencilInstance};

/// Hermitian matrix with real and imaginary parts uniform in `[-scale, scale]`.
pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> HermitianForm {
    let m = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(
            rng.random_range(-scale..=scale),
            rng.random_range(-scale..=scale),
        )
    });
    HermitianForm::new(&m + m.adjoint()).expect("finite square matrix")
}

/// Unitary matrix from the QR factorization of a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
    });
    g.qr().q()
}

/// Pencil with random `M` and a Levi form `U diag(l) U^*` whose eigenvalue
/// magnitudes lie in `[0.5, 2]` with random signs.
pub fn random_pencil<R: Rng>(rng: &mut R, dim: usize) -> PencilInstance {
    let diag: Vec<f64> = (0..dim)
        .map(|_| {
            let mag = rng.random_range(0.5..=2.0);
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let u = random_unitary(rng, dim);
    let l = HermitianForm::from_real_diagonal(&diag)
        .expect("nonempty")
        .congruence(&u.adjoint())
        .expect("square");
    PencilInstance::new(random_hermitian(rng, dim, 1.0), l).expect("Levi form is nondegenerate")
}

/// A uniformly chosen `q` with a bounded signature set.
///
/// Panics if there is none, which happens only for `dim = 1`.
pub fn random_admissible_q<R: Rng>(rng: &mut R, p: &PencilInstance) -> usize {
    let qs = p.levi_signature().admissible_qs();
    qs[rng.random_range(0..qs.len())]
}

/// Diagonal model with `lambda_j` of magnitude `[0.5, 2]` and random sign and
/// `mu_jj` uniform in `[-2, 2]`.
pub fn random_diagonal_model<R: Rng>(rng: &mut R, dim: usize) -> ModelParams {
    let lambda: Vec<f64> = (0..dim)
        .map(|_| {
            let mag = rng.random_range(0.5..=2.0);
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let mu: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..=2.0)).collect();
    ModelParams::diagonal(&lambda, &mu).expect("nonzero lambda")
}

/// Model with a full Hermitian weight.
pub fn random_model<R: Rng>(rng: &mut R, dim: usize) -> ModelParams {
    let diag = random_diagonal_model(rng, dim);
    ModelParams::new(diag.lambda().to_vec(), random_hermitian(rng, dim, 1.0), 0.0)
        .expect("nonzero lambda")
}
