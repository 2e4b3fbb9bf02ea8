use std::f64::consts::PI;

use crmorse_core::model::{
    bergman_trace, extremal_value, harmonic_norm_check, model_signature_set, substitution_check,
    ModelParams,
};
use crmorse_core::oracle::gaussian_norm_quadrature;
use crmorse_core::oracle::instances::{random_diagonal_model, random_model};
use crmorse_core::quadrature::adaptive_gauss_kronrod;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn admissible_q(rng: &mut ChaCha8Rng, p: &ModelParams) -> usize {
    let qs = p.levi_signature().admissible_qs();
    qs[rng.random_range(0..qs.len())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn substitution_identity(seed in any::<u64>(), dim in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_model(&mut rng, dim);
        let q = admissible_q(&mut rng, &p);
        let s = substitution_check(&p, q).unwrap();
        prop_assert!(s.abs_diff <= 1e-10 * (1.0 + s.model_value), "{:?}", s);
    }

    #[test]
    fn gaussian_identity(a in proptest::collection::vec(-8.0f64..-0.1, 1..=3)) {
        let exact: f64 = a.iter().map(|x| 2.0 * PI / -x).product();
        let v = gaussian_norm_quadrature(&a).unwrap();
        prop_assert!((v - exact).abs() <= 1e-10 * exact);
    }
}

#[test]
fn bergman_trace_integrates_to_extremal_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let zero = |d| vec![Complex64::new(0.0, 0.0); d];
    for _ in 0..50 {
        let dim = rng.random_range(2..=4);
        let p = random_model(&mut rng, dim);
        let q = admissible_q(&mut rng, &p);
        let r = p.eta_pencil().root_bound() + 1.0;
        let z = zero(dim);
        // Piecewise over the roots of det, where the integrand jumps.
        let mut edges = vec![-r];
        edges.extend(
            model_signature_set(&p, q)
                .unwrap()
                .roots()
                .iter()
                .filter(|b| b.abs() < r),
        );
        edges.push(r);
        let v: f64 = edges
            .windows(2)
            .map(|w| {
                adaptive_gauss_kronrod(
                    |eta| bergman_trace(&z, eta, &p, q).unwrap(),
                    w[0],
                    w[1],
                    1e-15,
                    1e-11,
                    4000,
                )
                .0
            })
            .sum();
        let lhs = std::f64::consts::SQRT_2 * v;
        let rhs = 2.0 * PI * extremal_value(&p, q).unwrap();
        assert!(
            (lhs - rhs).abs() <= 1e-8 * rhs.max(1e-300),
            "{lhs} vs {rhs}"
        );
    }
}

#[test]
fn harmonic_norm_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    let mut done = 0;
    while done < 10 {
        let dim = rng.random_range(2..=3);
        let p = random_diagonal_model(&mut rng, dim);
        let q = admissible_q(&mut rng, &p);
        let set = model_signature_set(&p, q).unwrap();
        let Some(iv) = set.intervals().first().copied() else {
            continue;
        };
        let eta = iv.lo + rng.random_range(0.2..0.8) * iv.len();
        let h = harmonic_norm_check(&p, q, eta).unwrap();
        assert!(
            (h.quadrature_value - h.closed_form_value).abs() <= 1e-6 * h.closed_form_value,
            "{h:?}"
        );
        done += 1;
    }
}
