//! Property checks shared by `crmorse verify` and the acceptance target. Each
//! check draws its instances from a seeded stream and reports the worst
//! measured deviation next to the tolerance it is held to.

use std::cell::RefCell;
use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crmorse_core::bounds::global_integral;
use crmorse_core::geometry::{
    bigness_hypothesis_check, heisenberg_spec, restrict_curvature, y_condition, y_equiv_signature,
};
use crmorse_core::model::{
    bergman_trace, extremal_value, harmonic_norm_check, model_signature_set, substitution_check,
    ModelParams,
};
use crmorse_core::oracle::instances::{
    random_admissible_q, random_diagonal_model, random_hermitian, random_model, random_pencil,
};
use crmorse_core::oracle::{gaussian_norm_quadrature, grid_signature_scan, oracle_root_bound};
use crmorse_core::pencil::{integrate_abs_det, local_density, signature_set, HermitianForm};
use crmorse_core::quadrature::adaptive_gauss_kronrod;

/// Result of one property check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// First failing case, if any.
    pub failure: Option<String>,
    pub elapsed_seconds: f64,
}

struct Tracker {
    name: String,
    tolerance: f64,
    cases: usize,
    worst: f64,
    failure: Option<String>,
    start: Instant,
}

impl Tracker {
    fn new(name: &str, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            cases: 0,
            worst: 0.0,
            failure: None,
            start: Instant::now(),
        }
    }

    /// Records one case; `describe` is called only if it fails.
    fn record(&mut self, deviation: f64, describe: impl FnOnce() -> String) {
        self.cases += 1;
        let bad = deviation.is_nan() || deviation > self.tolerance;
        if deviation > self.worst || deviation.is_nan() {
            self.worst = deviation;
        }
        if bad && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn fail(&mut self, message: String) {
        self.cases += 1;
        if self.failure.is_none() {
            self.failure = Some(message);
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            passed: self.failure.is_none(),
            name: self.name,
            cases: self.cases,
            worst: self.worst,
            tolerance: self.tolerance,
            failure: self.failure,
            elapsed_seconds: self.start.elapsed().as_secs_f64(),
        }
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn relative(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Exact `|det|` integral against a midpoint-grid inertia scan.
pub fn oracle_agreement(seed: u64, instances: usize, grid_points: usize) -> CheckOutcome {
    let mut t = Tracker::new("pencil integral vs grid scan (relative)", 1e-3);
    let mut rng = stream(seed, 1);
    for i in 0..instances {
        let dim = rng.random_range(2..=5);
        let p = random_pencil(&mut rng, dim);
        let q = random_admissible_q(&mut rng, &p);
        let exact = signature_set(&p, q).and_then(|s| integrate_abs_det(&p, &s));
        let grid = grid_signature_scan(&p, q, grid_points);
        match (exact, grid) {
            (Ok(exact), Ok(grid)) => {
                let g = grid.riemann_integral;
                t.record(relative(g, exact), || {
                    format!("instance {i} (dim {dim}, q {q}): exact {exact:e}, grid {g:e}")
                });
            }
            (Err(e), _) | (_, Err(e)) => t.fail(format!("instance {i}: {e}")),
        }
    }
    t.finish()
}

/// `||M|| / sigma_min(L)` against the oracle's Jacobi spectra.
pub fn root_bound_agreement(seed: u64, instances: usize) -> CheckOutcome {
    let mut t = Tracker::new("root bound vs Jacobi oracle (relative)", 1e-10);
    let mut rng = stream(seed, 2);
    for i in 0..instances {
        let dim = rng.random_range(1..=6);
        let p = random_pencil(&mut rng, dim);
        let (a, b) = (p.root_bound(), oracle_root_bound(&p));
        t.record((a - b).abs() / a.max(1.0), || {
            format!("instance {i}: {a} vs {b}")
        });
    }
    t.finish()
}

/// Shifting `M` by `tL` translates the signature set by `-t` and keeps the density.
pub fn trivialization_invariance(seed: u64, instances: usize, shifts: &[f64]) -> CheckOutcome {
    let mut t = Tracker::new("shift: endpoint translation and density", 1e-9);
    let mut rng = stream(seed, 3);
    for i in 0..instances {
        let dim = rng.random_range(2..=5);
        let p = random_pencil(&mut rng, dim);
        let q = random_admissible_q(&mut rng, &p);
        let (base_set, base_density) = match (signature_set(&p, q), local_density(&p, q, dim + 1)) {
            (Ok(s), Ok(d)) => (s, d),
            (Err(e), _) | (_, Err(e)) => {
                t.fail(format!("instance {i}: {e}"));
                continue;
            }
        };
        for &shift in shifts {
            let moved = p.shifted(shift);
            let (set, density) = match (signature_set(&moved, q), local_density(&moved, q, dim + 1))
            {
                (Ok(s), Ok(d)) => (s, d),
                (Err(e), _) | (_, Err(e)) => {
                    t.fail(format!("instance {i}, t = {shift}: {e}"));
                    continue;
                }
            };
            if set.intervals.len() != base_set.intervals.len() {
                t.fail(format!(
                    "instance {i}, t = {shift}: {} intervals before, {} after",
                    base_set.intervals.len(),
                    set.intervals.len()
                ));
                continue;
            }
            let endpoint = base_set
                .intervals
                .iter()
                .zip(&set.intervals)
                .map(|(a, b)| ((b.lo - (a.lo - shift)).abs()).max((b.hi - (a.hi - shift)).abs()))
                .fold(0.0_f64, f64::max);
            let dens = relative(density, base_density);
            t.record(endpoint.max(dens), || {
                format!("instance {i} (dim {dim}, q {q}), t = {shift}: endpoint error {endpoint:e}, density error {dens:e}")
            });
        }
    }
    t.finish()
}

/// Exhaustive `Y(q)` against the signature rule over all sign patterns.
pub fn y_equivalence(max_dim: usize) -> CheckOutcome {
    let mut t = Tracker::new("Y(q) vs signature rule (mismatches)", 0.0);
    for d in 1..=max_dim {
        for mask in 0..(1u64 << d) {
            let eigs: Vec<f64> = (0..d)
                .map(|j| if mask >> j & 1 == 1 { -1.0 } else { 1.0 })
                .collect();
            for q in 0..=d {
                match (y_condition(&eigs, q), y_equiv_signature(&eigs, q)) {
                    (Ok(a), Ok(b)) => t.record(if a == b { 0.0 } else { 1.0 }, || {
                        format!("eigenvalues {eigs:?}, q {q}: Y(q) = {a}, signature rule = {b}")
                    }),
                    (Err(e), _) | (_, Err(e)) => t.fail(format!("{eigs:?}, q {q}: {e}")),
                }
            }
        }
    }
    t.finish()
}

/// Eigenvalues of a form restricted to a complex hyperplane interlace the originals.
pub fn restriction_interlacing(seed: u64, cases: usize) -> CheckOutcome {
    let mut t = Tracker::new("hyperplane restriction interlacing (violation)", 1e-9);
    let mut rng = stream(seed, 4);
    for i in 0..cases {
        let n = rng.random_range(2..=6);
        let rl = random_hermitian(&mut rng, n, 1.0);
        let dr: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        match restrict_curvature(&rl, &dr) {
            Ok(r) => {
                let (a, b) = (rl.eigenvalues(), r.eigenvalues());
                let violation = (0..n - 1)
                    .map(|k| (a[k] - b[k]).max(b[k] - a[k + 1]).max(0.0))
                    .fold(0.0_f64, f64::max);
                t.record(violation, || format!("case {i}: {a:?} vs {b:?}"));
            }
            Err(e) => t.fail(format!("case {i}: {e}")),
        }
    }
    t.finish()
}

fn sign_patterns(max_dim: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for d in 1..=max_dim {
        for n_minus in 0..=d {
            for mags in 0..(1u32 << d) {
                out.push(
                    (0..d)
                        .map(|j| {
                            let m = if mags >> j & 1 == 1 { 2 } else { 1 };
                            if j < n_minus {
                                -m
                            } else {
                                m
                            }
                        })
                        .collect(),
                );
            }
        }
    }
    out
}

/// `mu = lambda` on the compact Heisenberg quotient: every admissible global
/// integral vanishes.
pub fn equal_weight_emptiness(max_dim: usize) -> CheckOutcome {
    let mut t = Tracker::new("mu = lambda gives zero global integrals (absolute)", 0.0);
    for lambda in sign_patterns(max_dim) {
        let spec = match heisenberg_spec(&lambda, &lambda, 4) {
            Ok(s) => s,
            Err(e) => {
                t.fail(format!("{lambda:?}: {e}"));
                continue;
            }
        };
        let sig = spec
            .levi_signature()
            .expect("generated specs are consistent");
        for q in sig.admissible_qs() {
            match global_integral(&spec, q) {
                Ok(v) => t.record(v.abs(), || {
                    format!("lambda {lambda:?}, q {q}: integral {v:e}")
                }),
                Err(e) => t.fail(format!("lambda {lambda:?}, q {q}: {e}")),
            }
        }
    }
    t.finish()
}

/// The two bigness fixtures: `diag(-1,-1,1,1)` satisfies every hypothesis with
/// the `q = 1` set empty and the `q = 0` set of positive measure;
/// `diag(-2,-1,1,1)` fails the multiplicity condition.
pub fn bigness_fixtures() -> CheckOutcome {
    let mut t = Tracker::new("bigness hypothesis fixtures (failed conditions)", 0.0);
    let identity = HermitianForm::identity(4);
    let good = HermitianForm::from_real_diagonal(&[-1.0, -1.0, 1.0, 1.0]).expect("finite");
    match bigness_hypothesis_check(&good, &identity) {
        Ok(r) => {
            let ok = r.hypotheses_satisfied
                && r.r1_empty == Some(true)
                && r.r0_measure.is_some_and(|m| m > 0.0);
            t.record(if ok { 0.0 } else { 1.0 }, || {
                format!("diag(-1,-1,1,1): {r:?}")
            });
        }
        Err(e) => t.fail(format!("diag(-1,-1,1,1): {e}")),
    }
    let bad = HermitianForm::from_real_diagonal(&[-2.0, -1.0, 1.0, 1.0]).expect("finite");
    match bigness_hypothesis_check(&bad, &identity) {
        Ok(r) => {
            let ok = !r.multiplicity_condition && !r.hypotheses_satisfied;
            t.record(if ok { 0.0 } else { 1.0 }, || {
                format!("diag(-2,-1,1,1): {r:?}")
            });
        }
        Err(e) => t.fail(format!("diag(-2,-1,1,1): {e}")),
    }
    t.finish()
}

fn model_q(rng: &mut ChaCha8Rng, p: &ModelParams) -> usize {
    let qs = p.levi_signature().admissible_qs();
    qs[rng.random_range(0..qs.len())]
}

/// Model route `sqrt 2 * int |det(mu - sqrt 2 eta lambda)| d eta` against the
/// pencil route `int |det(mu + s lambda)| ds`.
pub fn substitution_identity(seed: u64, instances: usize) -> CheckOutcome {
    let mut t = Tracker::new("change of variables eta -> s (abs / (1 + value))", 1e-10);
    let mut rng = stream(seed, 5);
    for i in 0..instances {
        let dim = rng.random_range(2..=5);
        let p = random_model(&mut rng, dim);
        let q = model_q(&mut rng, &p);
        match substitution_check(&p, q) {
            Ok(s) => t.record(s.abs_diff / (1.0 + s.model_value.abs()), || {
                format!("instance {i} (dim {dim}, q {q}): {s:?}")
            }),
            Err(e) => t.fail(format!("instance {i}: {e}")),
        }
    }
    t.finish()
}

/// `lambda = (-1, 1)`, `mu = I`, `q = 0`: both routes give `4/3`.
pub fn substitution_fixture() -> CheckOutcome {
    let mut t = Tracker::new("change of variables fixture 4/3 (absolute)", 1e-12);
    let p = ModelParams::diagonal(&[-1.0, 1.0], &[1.0, 1.0]).expect("valid fixture");
    match substitution_check(&p, 0) {
        Ok(s) => {
            let err = (s.model_value - 4.0 / 3.0)
                .abs()
                .max((s.pencil_value - 4.0 / 3.0).abs());
            t.record(err, || format!("{s:?}"));
        }
        Err(e) => t.fail(e.to_string()),
    }
    t.finish()
}

/// Tensor Gauss-Laguerre Gaussian integrals against `prod 2 pi / |a_j|`.
pub fn gaussian_identity(seed: u64, cases: usize) -> CheckOutcome {
    let mut t = Tracker::new("Gaussian integral quadrature (relative)", 1e-10);
    let mut rng = stream(seed, 6);
    for i in 0..cases {
        let d = rng.random_range(1..=3);
        let a: Vec<f64> = (0..d).map(|_| -rng.random_range(0.1..8.0)).collect();
        let exact: f64 = a.iter().map(|x| 2.0 * PI / -x).product();
        match gaussian_norm_quadrature(&a) {
            Ok(v) => t.record(relative(v, exact), || {
                format!("case {i}, a = {a:?}: {v} vs {exact}")
            }),
            Err(e) => t.fail(format!("case {i}: {e}")),
        }
    }
    t.finish()
}

/// Quadrature of `|s_eta|^2 e^{-2 Phi_eta}` against its closed form, at `eta`
/// drawn inside the signature set.
pub fn harmonic_norm(seed: u64, instances: usize) -> CheckOutcome {
    let mut t = Tracker::new("harmonic representative norm (relative)", 1e-6);
    let mut rng = stream(seed, 7);
    let mut attempts = 0;
    while t.cases < instances && attempts < 100 * instances {
        attempts += 1;
        let dim = rng.random_range(2..=3);
        let p = random_diagonal_model(&mut rng, dim);
        let q = model_q(&mut rng, &p);
        let set = match model_signature_set(&p, q) {
            Ok(s) => s,
            Err(e) => {
                t.fail(format!("dim {dim}, q {q}: {e}"));
                continue;
            }
        };
        let Some(iv) = set.intervals().first().copied() else {
            continue;
        };
        let eta = iv.lo + rng.random_range(0.2..0.8) * iv.len();
        match harmonic_norm_check(&p, q, eta) {
            Ok(h) => t.record(relative(h.quadrature_value, h.closed_form_value), || {
                format!("dim {dim}, q {q}, eta {eta}: {h:?}")
            }),
            Err(e) => t.fail(format!("dim {dim}, q {q}, eta {eta}: {e}")),
        }
    }
    if t.cases < instances {
        t.fail(format!("only {} instances with a nonempty set", t.cases));
    }
    t.finish()
}

/// `sqrt 2 * int bergman_trace(0, eta) d eta` by adaptive Gauss-Kronrod against
/// `2 pi * extremal_value` from exact interval integration.
pub fn bergman_consistency(seed: u64, instances: usize) -> CheckOutcome {
    let mut t = Tracker::new("Bergman trace integral vs extremal value (relative)", 1e-8);
    let mut rng = stream(seed, 8);
    for i in 0..instances {
        let dim = rng.random_range(2..=4);
        let p = random_model(&mut rng, dim);
        let q = model_q(&mut rng, &p);
        let z = vec![Complex64::new(0.0, 0.0); dim];
        let r = p.eta_pencil().root_bound() + 1.0;
        // Split at the roots of det so every piece has a smooth integrand.
        let breaks = match model_signature_set(&p, q) {
            Ok(set) => set.roots().to_vec(),
            Err(e) => {
                t.fail(format!("instance {i}: {e}"));
                continue;
            }
        };
        let mut edges = vec![-r];
        edges.extend(breaks.iter().copied().filter(|b| b.abs() < r));
        edges.push(r);
        let failure = RefCell::new(None);
        let v: f64 = edges
            .windows(2)
            .map(|w| {
                adaptive_gauss_kronrod(
                    |eta| match bergman_trace(&z, eta, &p, q) {
                        Ok(x) => x,
                        Err(e) => {
                            failure.borrow_mut().get_or_insert(e);
                            0.0
                        }
                    },
                    w[0],
                    w[1],
                    1e-15,
                    1e-11,
                    4000,
                )
                .0
            })
            .sum();
        if let Some(e) = failure.into_inner() {
            t.fail(format!("instance {i}: {e}"));
            continue;
        }
        match extremal_value(&p, q) {
            Ok(ev) => {
                let (lhs, rhs) = (SQRT_2 * v, 2.0 * PI * ev);
                t.record(relative(lhs, rhs), || {
                    format!("instance {i} (dim {dim}, q {q}): {lhs:e} vs {rhs:e}")
                });
            }
            Err(e) => t.fail(format!("instance {i}: {e}")),
        }
    }
    t.finish()
}
