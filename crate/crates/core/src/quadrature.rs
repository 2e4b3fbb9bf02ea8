//! Quadrature rules: Gauss-Laguerre for Gaussian-decaying integrands and an
//! adaptive Gauss-Kronrod rule for piecewise-smooth integrands on intervals.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of the `n`-point rule for `int_0^inf e^{-t} f(t) dt`.
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Laguerre rule needs at least one node");
        // Golub-Welsch for starting values, then Newton on L_n.
        let jacobi = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                (2 * i + 1) as f64
            } else if i.abs_diff(j) == 1 {
                i.max(j) as f64
            } else {
                0.0
            }
        });
        let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        nodes.sort_by(f64::total_cmp);

        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..4 {
                let (ln, lnm1) = laguerre_pair(n, *x);
                let dln = n as f64 * (ln - lnm1) / *x;
                let step = ln / dln;
                *x -= step;
                if step.abs() <= 1e-15 * x.abs() {
                    break;
                }
            }
            let (lnp1, _) = laguerre_pair(n + 1, *x);
            weights.push(*x / ((n + 1) as f64 * lnp1).powi(2));
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i f(x_i)`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `(L_n(x), L_{n-1}(x))` by the three-term recurrence.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    if n == 0 {
        return (prev, 0.0);
    }
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Tensor-product radial rule on `C^d` under `dv(z) = 2^d dx_1 ... dx_{2d}`.
///
/// Integrates a function of the squared moduli `u_j = |z_j|^2`. Each coordinate
/// is substituted as `u_j = t_j / scale_j`, so the rule is exact when the
/// integrand equals `e^{-sum scale_j u_j}` times a low-degree polynomial in `u`.
pub fn radial_tensor_integral(
    rule: &GaussLaguerre,
    scales: &[f64],
    mut integrand: impl FnMut(&[f64]) -> f64,
) -> f64 {
    let d = scales.len();
    // int_C g(|w|^2) 2 dx dy = 2 pi int_0^inf g(u) du = (2 pi / c) int e^{-t} e^{t} g(t / c) dt
    let prefactor: f64 = scales
        .iter()
        .map(|c| 2.0 * std::f64::consts::PI / c)
        .product();
    let m = rule.len();
    // w_i e^{t_i} stays O(1) even where w_i underflows the product of d weights.
    let modified: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| (w.ln() + t).exp())
        .collect();
    let mut idx = vec![0usize; d];
    let mut u = vec![0.0; d];
    let mut total = 0.0;
    loop {
        let mut w = 1.0;
        for j in 0..d {
            w *= modified[idx[j]];
            u[j] = rule.nodes[idx[j]] / scales[j];
        }
        total += w * integrand(&u);

        let mut j = 0;
        loop {
            if j == d {
                return prefactor * total;
            }
            idx[j] += 1;
            if idx[j] < m {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

const GK15_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = GK15_WEIGHTS[7] * fc;
    let mut gauss = G7_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK15_NODES[i];
        let pair = f(c - x) + f(c + x);
        kron += GK15_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += G7_WEIGHTS[i / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive Gauss-Kronrod (7/15) integration on `[a, b]`.
///
/// Bisects the subinterval with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol * |I|)` or `max_intervals` is hit.
pub fn adaptive_gauss_kronrod(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> (f64, f64) {
    let (v, e) = gk15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) || parts.len() >= max_intervals {
            return (total, err);
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_moments_are_factorials() {
        let rule = GaussLaguerre::new(64);
        let mut fact = 1.0;
        for k in 0..30 {
            if k > 0 {
                fact *= k as f64;
            }
            let m = rule.apply(|x| x.powi(k));
            assert!((m - fact).abs() <= 1e-11 * fact, "k={k}: {m} vs {fact}");
        }
    }

    #[test]
    fn laguerre_small_rule() {
        // Two-point rule: nodes 2 -+ sqrt 2.
        let rule = GaussLaguerre::new(2);
        assert!((rule.nodes[0] - (2.0 - 2f64.sqrt())).abs() < 1e-14);
        assert!((rule.nodes[1] - (2.0 + 2f64.sqrt())).abs() < 1e-14);
        assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn radial_gaussian_in_one_variable() {
        let rule = GaussLaguerre::new(16);
        let v = radial_tensor_integral(&rule, &[3.0], |u| (-3.0 * u[0]).exp());
        assert!((v - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn kronrod_handles_kinks() {
        let f = |x: f64| (1.0 - x * x).max(0.0);
        let (v, _) = adaptive_gauss_kronrod(f, -3.0, 2.5, 1e-14, 1e-13, 2000);
        assert!((v - 4.0 / 3.0).abs() < 1e-11, "{v}");
        let (p, _) = adaptive_gauss_kronrod(|x| x.powi(5) - x, 0.0, 2.0, 1e-15, 1e-15, 10);
        assert!((p - (64.0 / 6.0 - 2.0)).abs() < 1e-12);
    }
}
