use crmorse_core::oracle::instances::{random_admissible_q, random_pencil};
use crmorse_core::oracle::{grid_signature_scan, oracle_root_bound};
use crmorse_core::pencil::{integrate_abs_det, signature_set, DetPolynomial, PencilInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn grid_integral_matches_exact_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0_f64;
    for _ in 0..40 {
        let dim = rng.random_range(2..=5);
        let p = random_pencil(&mut rng, dim);
        let q = random_admissible_q(&mut rng, &p);
        let exact = integrate_abs_det(&p, &signature_set(&p, q).unwrap()).unwrap();
        let grid = grid_signature_scan(&p, q, 100_000)
            .unwrap()
            .riemann_integral;
        let rel = if exact == 0.0 {
            grid.abs()
        } else {
            (grid - exact).abs() / exact
        };
        worst = worst.max(rel);
        assert!(rel <= 1e-3, "dim {dim} q {q}: exact {exact}, grid {grid}");
    }
    println!("worst relative error {worst:e}");
}

#[test]
fn grid_runs_match_intervals() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let dim = rng.random_range(2..=4);
        let p = random_pencil(&mut rng, dim);
        let q = random_admissible_q(&mut rng, &p);
        let set = signature_set(&p, q).unwrap();
        let grid = grid_signature_scan(&p, q, 20_000).unwrap();
        // Intervals narrower than a grid cell may be missed; compare the rest.
        let wide: Vec<_> = set
            .intervals
            .iter()
            .filter(|i| i.len() > 4.0 * grid.step)
            .collect();
        let runs = grid.runs(q, dim);
        assert_eq!(runs.len(), wide.len(), "{set:?}");
        for (r, i) in runs.iter().zip(wide) {
            assert!((r.lo - i.lo).abs() <= 2.0 * grid.step);
            assert!((r.hi - i.hi).abs() <= 2.0 * grid.step);
        }
    }
}

#[test]
fn root_bound_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let dim = rng.random_range(1..=6);
        let p = random_pencil(&mut rng, dim);
        let (a, b) = (p.root_bound(), oracle_root_bound(&p));
        assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }
}

#[test]
fn companion_roots_agree_with_set_endpoints() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let dim = rng.random_range(2..=5);
        let p = random_pencil(&mut rng, dim);
        let q = random_admissible_q(&mut rng, &p);
        let set = signature_set(&p, q).unwrap();
        let poly: DetPolynomial = crmorse_core::pencil::pencil_det_poly(&p);
        let roots = poly.companion_real_roots(1e-7 * (1.0 + p.root_bound()));
        for i in &set.intervals {
            for e in [i.lo, i.hi] {
                let nearest = roots
                    .iter()
                    .map(|r| (r - e).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(
                    nearest < 1e-6 * (1.0 + e.abs()),
                    "endpoint {e} vs {roots:?}"
                );
            }
        }
    }
}

/// Least-squares slope of `log err` against `log step`.
fn slope(steps: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = steps.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

#[test]
fn riemann_sum_converges_at_least_first_order() {
    let fixtures = [
        PencilInstance::diagonal(&[1.0, 1.0], &[1.0, -1.0]).unwrap(),
        PencilInstance::diagonal(&[1.0, 2.0, 0.5], &[-1.0, 1.5, 1.0]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut pencils: Vec<PencilInstance> = fixtures.to_vec();
    pencils.extend((0..4).map(|_| random_pencil(&mut rng, 3)));
    for p in pencils {
        let q = p.levi_signature().admissible_qs()[0];
        let exact = integrate_abs_det(&p, &signature_set(&p, q).unwrap()).unwrap();
        if exact == 0.0 {
            continue;
        }
        let mut steps = Vec::new();
        let mut errs = Vec::new();
        for n in [1000, 4000, 16000, 64000] {
            let g = grid_signature_scan(&p, q, n).unwrap();
            steps.push(g.step);
            errs.push((g.riemann_integral - exact).abs().max(1e-300));
        }
        let order = slope(&steps, &errs);
        println!("errors {errs:?} slope {order:.3}");
        assert!(order >= 0.8, "slope {order}");
    }
}
