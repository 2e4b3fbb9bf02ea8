//! Hermitian pencils `s -> M + sL`: determinant polynomial, real roots,
//! signature sets and exact integration of `|det(M + sL)|` over them.

mod form;
mod poly;

pub use form::{hermitian_eigenvalues, inertia, ComplexRows, HermitianForm, Inertia};
pub use poly::DetPolynomial;

use std::f64::consts::PI;

use nalgebra::linalg::Schur;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative threshold below which `sigma_min(L) / ||L||_2` counts as degenerate.
pub const LEVI_DEGENERACY_TOL: f64 = 1e-10;

/// Eigenvalue sign counts of a nondegenerate Levi form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeviSignature {
    pub n_minus: usize,
    pub n_plus: usize,
}

impl LeviSignature {
    pub fn dim(&self) -> usize {
        self.n_minus + self.n_plus
    }

    /// `q` values for which the signature set is bounded (`q` not in `{n_minus, n_plus}`).
    pub fn admits(&self, q: usize) -> bool {
        q <= self.dim() && q != self.n_minus && q != self.n_plus
    }

    pub fn admissible_qs(&self) -> Vec<usize> {
        (0..=self.dim()).filter(|&q| self.admits(q)).collect()
    }
}

/// The pointwise pair `(M, L)`: curvature-type form and nondegenerate Levi form.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilInstance {
    m: HermitianForm,
    l: HermitianForm,
    signature: LeviSignature,
    norm_m: f64,
    sigma_min_l: f64,
}

impl PencilInstance {
    pub fn new(m: HermitianForm, l: HermitianForm) -> Result<Self> {
        if m.dim() != l.dim() {
            return Err(Error::DimensionMismatch(format!(
                "M has dimension {}, L has dimension {}",
                m.dim(),
                l.dim()
            )));
        }
        let l_eigs = l.eigenvalues();
        let norm_l = l_eigs.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let sigma_min_l = l_eigs.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
        let threshold = LEVI_DEGENERACY_TOL * norm_l;
        if norm_l == 0.0 || sigma_min_l <= threshold {
            return Err(Error::SingularLevi {
                sigma_min: sigma_min_l,
                threshold,
            });
        }
        let n_minus = l_eigs.iter().filter(|&&v| v < 0.0).count();
        let signature = LeviSignature {
            n_minus,
            n_plus: l.dim() - n_minus,
        };
        let norm_m = m.norm2();
        Ok(Self {
            m,
            l,
            signature,
            norm_m,
            sigma_min_l,
        })
    }

    /// Diagonal pencil `(diag(m), diag(l))`.
    pub fn diagonal(m: &[f64], l: &[f64]) -> Result<Self> {
        Self::new(
            HermitianForm::from_real_diagonal(m)?,
            HermitianForm::from_real_diagonal(l)?,
        )
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn m(&self) -> &HermitianForm {
        &self.m
    }

    pub fn l(&self) -> &HermitianForm {
        &self.l
    }

    pub fn levi_signature(&self) -> LeviSignature {
        self.signature
    }

    /// `R = ||M||_2 / sigma_min(L)`; every real root of `det(M + sL)` lies in `[-R, R]`.
    pub fn root_bound(&self) -> f64 {
        self.norm_m / self.sigma_min_l
    }

    /// `M + sL`.
    pub fn at(&self, s: f64) -> HermitianForm {
        self.m
            .add_scaled(s, &self.l)
            .expect("pencil forms share a dimension")
    }

    /// `(M + tL, L)`: the pencil after a change of local trivialization.
    pub fn shifted(&self, t: f64) -> Self {
        Self::new(self.at(t), self.l.clone()).expect("L is unchanged and nondegenerate")
    }

    /// `(cM, cL)`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.m.scaled(c), self.l.scaled(c))
    }

    /// `(P^* M P, P^* L P)`.
    pub fn congruence(&self, p: &nalgebra::DMatrix<num_complex::Complex64>) -> Result<Self> {
        Self::new(self.m.congruence(p)?, self.l.congruence(p)?)
    }

    /// Real roots of `det(M + sL)`, i.e. the real eigenvalues of `-L^{-1} M`.
    fn pencil_eigenvalues(&self, imag_tol: f64) -> Vec<f64> {
        let lu = self.l.matrix().clone().lu();
        let linv_m = lu
            .solve(self.m.matrix())
            .expect("L is nondegenerate by construction");
        let a = -linv_m;
        let t = Schur::new(a).unpack().1;
        (0..t.nrows())
            .map(|i| t[(i, i)])
            .filter(|z| z.im.abs() <= imag_tol)
            .map(|z| z.re)
            .collect()
    }
}

impl Serialize for PencilInstance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            #[serde(rename = "M")]
            m: &'a HermitianForm,
            #[serde(rename = "L")]
            l: &'a HermitianForm,
        }
        Wire {
            m: &self.m,
            l: &self.l,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PencilInstance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            #[serde(rename = "M")]
            m: HermitianForm,
            #[serde(rename = "L")]
            l: HermitianForm,
        }
        let w = Wire::deserialize(deserializer)?;
        PencilInstance::new(w.m, w.l).map_err(serde::de::Error::custom)
    }
}

/// An open interval `(lo, hi)` of the pencil parameter; serialized as `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, s: f64) -> bool {
        self.lo < s && s < self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

impl From<[f64; 2]> for Interval {
    fn from(v: [f64; 2]) -> Self {
        Interval { lo: v[0], hi: v[1] }
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

/// A gap between consecutive roots (or an outer ray) with its sampled inertia.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub sample: f64,
    pub inertia: Inertia,
}

/// The set of `s` where `M + sL` has exactly `q` negative and `dim - q` positive
/// eigenvalues, as sorted disjoint open intervals between real roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureSet {
    pub q: usize,
    pub dim: usize,
    pub intervals: Vec<Interval>,
    pub roots: Vec<f64>,
    pub bound: f64,
    /// Every gap between roots, including both outer rays, with the inertia
    /// sampled inside it.
    #[serde(skip)]
    pub segments: Vec<Segment>,
}

impl SignatureSet {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Lebesgue measure of the set.
    pub fn measure(&self) -> f64 {
        self.intervals
            .iter()
            .map(Interval::len)
            .fold(0.0, |a, b| a + b)
    }

    pub fn contains(&self, s: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(s))
    }

    /// The set translated by `delta`.
    pub fn translated(&self, delta: f64) -> SignatureSet {
        let mv = |x: f64| x + delta;
        SignatureSet {
            q: self.q,
            dim: self.dim,
            intervals: self
                .intervals
                .iter()
                .map(|i| Interval {
                    lo: mv(i.lo),
                    hi: mv(i.hi),
                })
                .collect(),
            roots: self.roots.iter().map(|&r| mv(r)).collect(),
            bound: self.bound + delta.abs(),
            segments: self
                .segments
                .iter()
                .map(|s| Segment {
                    lo: mv(s.lo),
                    hi: mv(s.hi),
                    sample: mv(s.sample),
                    inertia: s.inertia,
                })
                .collect(),
        }
    }
}

/// Tolerances for real-root isolation, relative to `1 + R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootTolerance {
    /// Eigenvalues with `|Im| <= imag * (1 + R)` count as real.
    pub imag: f64,
    /// Roots closer than `cluster * (1 + R)` are merged.
    pub cluster: f64,
    /// Newton polishing stops once `|p(s)| <= residual * sum |c_k||s|^k`.
    pub residual: f64,
}

impl Default for RootTolerance {
    fn default() -> Self {
        Self {
            imag: 1e-9,
            cluster: 1e-8,
            residual: 1e-12,
        }
    }
}

/// `det(M + sL)` in the monomial basis.
///
/// The determinant is sampled at `dim + 1` Chebyshev nodes scaled to `[-R, R]`
/// and the Vandermonde system is solved in the scaled variable `s / R`.
pub fn pencil_det_poly(p: &PencilInstance) -> DetPolynomial {
    let d = p.dim();
    let r = p.root_bound();
    let radius = if r > 0.0 && r.is_finite() { r } else { 1.0 };
    let nodes: Vec<f64> = (0..=d)
        .map(|k| ((2 * k + 1) as f64 * PI / (2.0 * (d + 1) as f64)).cos())
        .collect();
    let values: Vec<f64> = nodes.iter().map(|&t| p.at(radius * t).det()).collect();
    let scaled = DetPolynomial::interpolate(&nodes, &values)
        .expect("Chebyshev Vandermonde system is nonsingular");
    let coefficients = scaled
        .iter()
        .enumerate()
        .map(|(k, &a)| a / radius.powi(k as i32))
        .collect();
    DetPolynomial::new(coefficients)
}

/// Signature set with the default root tolerances.
pub fn signature_set(p: &PencilInstance, q: usize) -> Result<SignatureSet> {
    signature_set_with(p, q, &RootTolerance::default())
}

pub fn signature_set_with(
    p: &PencilInstance,
    q: usize,
    tol: &RootTolerance,
) -> Result<SignatureSet> {
    let d = p.dim();
    if q > d {
        return Err(Error::QOutOfRange { q, dim: d });
    }
    let sig = p.levi_signature();
    if !sig.admits(q) {
        return Err(Error::UnboundedSignatureSet {
            q,
            n_minus: sig.n_minus,
            n_plus: sig.n_plus,
        });
    }

    let bound = p.root_bound();
    let scale = 1.0 + bound;
    let poly = pencil_det_poly(p);

    let mut candidates: Vec<f64> = p
        .pencil_eigenvalues(tol.imag * scale)
        .into_iter()
        .map(|s| polish_bounded(&poly, s, tol, scale))
        .collect();
    candidates.sort_by(f64::total_cmp);
    let roots = cluster_roots(&candidates, tol.cluster * scale);

    let mut segments = Vec::with_capacity(roots.len() + 1);
    let outer_lo = roots.first().map_or(-bound, |&r| r.min(-bound)) - 1.0;
    let outer_hi = roots.last().map_or(bound, |&r| r.max(bound)) + 1.0;
    let mut edges = Vec::with_capacity(roots.len() + 2);
    edges.push(f64::NEG_INFINITY);
    edges.extend_from_slice(&roots);
    edges.push(f64::INFINITY);
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let sample = if lo == f64::NEG_INFINITY {
            outer_lo
        } else if hi == f64::INFINITY {
            outer_hi
        } else {
            0.5 * (lo + hi)
        };
        segments.push(Segment {
            lo,
            hi,
            sample,
            inertia: p.at(sample).inertia_default(),
        });
    }

    let intervals = segments
        .iter()
        .filter(|s| s.lo.is_finite() && s.hi.is_finite())
        .filter(|s| s.inertia.neg == q && s.inertia.zero == 0 && s.inertia.pos == d - q)
        .map(|s| Interval { lo: s.lo, hi: s.hi })
        .collect();

    Ok(SignatureSet {
        q,
        dim: d,
        intervals,
        roots,
        bound,
        segments,
    })
}

fn polish_bounded(poly: &DetPolynomial, s: f64, tol: &RootTolerance, scale: f64) -> f64 {
    let polished = poly.newton_polish(s, tol.residual, 20);
    if (polished - s).abs() <= tol.cluster * scale {
        polished
    } else {
        s
    }
}

fn cluster_roots(sorted: &[f64], spacing: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(sorted.len());
    let mut group: Vec<f64> = Vec::new();
    for &r in sorted {
        if let Some(&last) = group.last() {
            if r - last >= spacing {
                out.push(group.iter().sum::<f64>() / group.len() as f64);
                group.clear();
            }
        }
        group.push(r);
    }
    if !group.is_empty() {
        out.push(group.iter().sum::<f64>() / group.len() as f64);
    }
    out
}

/// `sum over intervals of |integral of det(M + sL) ds|`.
///
/// `det` has constant sign on each interval, so this equals the integral of `|det|`.
pub fn integrate_abs_det(p: &PencilInstance, set: &SignatureSet) -> Result<f64> {
    if set.dim != p.dim() {
        return Err(Error::InconsistentInput(format!(
            "signature set has dimension {}, pencil has {}",
            set.dim,
            p.dim()
        )));
    }
    let poly = pencil_det_poly(p);
    for &r in &set.roots {
        let scale = poly.abs_scale(r).max(f64::MIN_POSITIVE);
        if poly.eval(r).abs() > 1e-6 * scale {
            return Err(Error::InconsistentInput(format!(
                "root {r} does not annihilate det(M + sL) (|p| = {:e}, scale {:e})",
                poly.eval(r).abs(),
                scale
            )));
        }
    }
    Ok(set
        .intervals
        .iter()
        .map(|i| poly.integrate(i.lo, i.hi).abs())
        .fold(0.0, |a, b| a + b))
}

/// `(2 pi)^{-n} * integral of |det(M + sL)|` over the signature set for `q`.
///
/// `n` is the manifold parameter (`dim X = 2n - 1`) and must equal `dim + 1`.
pub fn local_density(p: &PencilInstance, q: usize, n: usize) -> Result<f64> {
    if n != p.dim() + 1 {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must equal pencil dimension + 1 = {}",
            p.dim() + 1
        )));
    }
    let set = signature_set(p, q)?;
    let integral = integrate_abs_det(p, &set)?;
    Ok(integral / (2.0 * PI).powi(n as i32))
}
