use crmorse_core::oracle::instances::{random_admissible_q, random_pencil, random_unitary};
use crmorse_core::pencil::{integrate_abs_det, signature_set, PencilInstance, SignatureSet};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, dim: usize) -> (PencilInstance, usize, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_pencil(&mut rng, dim);
    let q = random_admissible_q(&mut rng, &p);
    (p, q, rng)
}

fn integral(p: &PencilInstance, set: &SignatureSet) -> f64 {
    integrate_abs_det(p, set).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn congruence_preserves_sets_and_scales_integral(seed in any::<u64>(), dim in 2usize..=5) {
        let (p, q, mut rng) = instance(seed, dim);
        // P = U diag(d), |det P|^2 = prod d^2.
        let d: Vec<f64> = (0..dim).map(|_| rng.random_range(0.5..2.0)).collect();
        let u = random_unitary(&mut rng, dim);
        let pm = u * DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            dim,
            d.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        let det2: f64 = d.iter().map(|x| x * x).product();
        let c = p.congruence(&pm).unwrap();
        let (a, b) = (signature_set(&p, q).unwrap(), signature_set(&c, q).unwrap());
        prop_assert_eq!(a.intervals.len(), b.intervals.len());
        for (x, y) in a.intervals.iter().zip(&b.intervals) {
            prop_assert!((x.lo - y.lo).abs() <= 1e-7 * (1.0 + x.lo.abs()));
            prop_assert!((x.hi - y.hi).abs() <= 1e-7 * (1.0 + x.hi.abs()));
        }
        prop_assert!(close(integral(&c, &b), det2 * integral(&p, &a), 1e-6));
    }

    #[test]
    fn shift_translates_set(seed in any::<u64>(), dim in 2usize..=5, t in -5.0f64..5.0) {
        let (p, q, _) = instance(seed, dim);
        let shifted = p.shifted(t);
        let (a, b) = (signature_set(&p, q).unwrap(), signature_set(&shifted, q).unwrap());
        prop_assert_eq!(a.intervals.len(), b.intervals.len());
        for (x, y) in a.intervals.iter().zip(&b.intervals) {
            prop_assert!((y.lo - (x.lo - t)).abs() <= 1e-9 * (1.0 + x.lo.abs()));
            prop_assert!((y.hi - (x.hi - t)).abs() <= 1e-9 * (1.0 + x.hi.abs()));
        }
        prop_assert!(close(integral(&shifted, &b), integral(&p, &a), 1e-9));
    }

    #[test]
    fn positive_scaling_is_homogeneous(seed in any::<u64>(), dim in 2usize..=5, c in 0.2f64..5.0) {
        let (p, q, _) = instance(seed, dim);
        let scaled = p.scaled(c).unwrap();
        let (a, b) = (signature_set(&p, q).unwrap(), signature_set(&scaled, q).unwrap());
        prop_assert_eq!(a.intervals.len(), b.intervals.len());
        for (x, y) in a.intervals.iter().zip(&b.intervals) {
            prop_assert!((x.lo - y.lo).abs() <= 1e-9 * (1.0 + x.lo.abs()));
        }
        prop_assert!(close(integral(&scaled, &b), c.powi(dim as i32) * integral(&p, &a), 1e-9));
    }

    #[test]
    fn roots_lie_within_bound(seed in any::<u64>(), dim in 2usize..=6) {
        let (p, _, _) = instance(seed, dim);
        let r = p.root_bound();
        let set = signature_set(&p, p.levi_signature().admissible_qs()[0]).unwrap();
        for root in &set.roots {
            prop_assert!(root.abs() <= r * (1.0 + 1e-9) + 1e-12);
        }
    }

    #[test]
    fn sets_partition_by_inertia(seed in any::<u64>(), dim in 2usize..=5) {
        let (p, _, _) = instance(seed, dim);
        // Each admissible q's intervals carry exactly inertia (q, 0, dim - q) at their midpoints.
        for q in p.levi_signature().admissible_qs() {
            for i in signature_set(&p, q).unwrap().intervals {
                let inertia = p.at(i.midpoint()).inertia_default();
                prop_assert_eq!((inertia.neg, inertia.zero), (q, 0));
            }
        }
    }
}
