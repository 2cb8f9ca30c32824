use num_complex::Complex64;
use serde::Serialize;

use super::{Certificate, DualFunction};
use crate::error::Result;
use crate::group::Subgroup;
use crate::linalg::{CMatrix, Subspace};

/// Default tolerance for `|ω(s) − 1|` in `Z_ω`.
pub const Z_TOL: f64 = 1e-9;

/// The level set `Z_ω = {s : ω(s) = 1}` and its coset structure.
#[derive(Clone, Debug, Serialize)]
pub struct ZSetReport {
    pub z_set: Vec<usize>,
    /// `Z_ω = s·H` for the subgroup `H = s⁻¹Z_ω`.
    pub is_coset: bool,
    pub rep: Option<usize>,
    pub subgroup: Option<Subgroup>,
    pub norm: Option<f64>,
    /// The norm is not certified or exceeds `1 + ε`, so the coset law is
    /// not guaranteed.
    pub flagged: bool,
    /// Smallest `|ω(s) − 1|` outside `Z_ω`, to expose near misses.
    pub nearest_miss: Option<f64>,
    /// For positive definite `ω` with `ω(e) = 1` whose powers have a
    /// nonsingular Gram sum: whether `Z_ω ⊆ {e}`.
    pub nondegenerate_ok: Option<bool>,
}

impl ZSetReport {
    /// The coset law holds (vacuously for an empty set) and, if checked,
    /// so does the non-degenerate bound.
    pub fn passes(&self) -> bool {
        (self.z_set.is_empty() || self.is_coset) && self.nondegenerate_ok.unwrap_or(true)
    }
}

/// Non-degenerate: the Gram matrix of `Σ_{k=1}^{|G|} ω^k` is positive
/// definite, i.e. no nonzero `ξ` is annihilated by all the powers.
fn is_nondegenerate(d: &DualFunction) -> Result<bool> {
    let g = d.group()?;
    let n = g.order();
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    let mut power = vec![Complex64::new(1.0, 0.0); n];
    for _ in 0..n {
        for (p, v) in power.iter_mut().zip(d.values()) {
            *p *= v;
        }
        for (a, p) in acc.iter_mut().zip(&power) {
            *a += p;
        }
    }
    let gram = CMatrix::from_fn(n, n, |s, t| acc[g.mul(g.inv(s), t)]);
    let hermitian = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = crate::linalg::hermitian_eigenvalues(&hermitian);
    let max = eig.iter().copied().fold(0.0, f64::max);
    Ok(eig.iter().all(|&l| l > 1e-8 * max.max(1.0)))
}

pub fn z_set(d: &DualFunction, eps: f64) -> Result<ZSetReport> {
    let g = d.group()?.clone();
    let values = d.values();
    let (z, misses): (Vec<usize>, Vec<usize>) = g.elements().partition(|&s| (values[s] - 1.0).norm() <= eps);
    let nearest_miss = misses.iter().map(|&s| (values[s] - 1.0).norm()).reduce(f64::min);
    let norm = d.norm();
    let flagged = norm.is_none_or(|n| n > 1.0 + eps);

    let (is_coset, rep, subgroup) = match z.first() {
        None => (false, None, None),
        Some(&s) => {
            let s_inv = g.inv(s);
            match Subgroup::new(g.clone(), z.iter().map(|&t| g.mul(s_inv, t))) {
                Ok(h) => (true, Some(s), Some(h)),
                Err(_) => (false, Some(s), None),
            }
        }
    };
    let nondegenerate_ok = match d.certificate() {
        Certificate::PositiveDefinite { norm } if (norm - 1.0).abs() <= eps && is_nondegenerate(d)? => {
            Some(z.iter().all(|&s| s == g.identity()))
        }
        _ => None,
    };
    Ok(ZSetReport { z_set: z, is_coset, rep, subgroup, norm, flagged, nearest_miss, nondegenerate_ok })
}

/// `Fix` of the multiplier `λ(g) ↦ ω(g)λ(g)` on `VN(G)` in the `λ(g)`
/// basis, against the prediction `λ(s)·VN(H) = span{λ(sh)}`.
#[derive(Clone, Debug, Serialize)]
pub struct VnFixedReport {
    pub dim: usize,
    /// Indices `g` with `λ(g)` in the fixed space.
    pub basis: Vec<usize>,
    pub predicted: Vec<usize>,
    pub matches: bool,
    #[serde(skip)]
    pub fixed: Subspace,
}

pub fn vn_fixed_space(d: &DualFunction, eps: f64) -> Result<VnFixedReport> {
    let g = d.group()?.clone();
    let report = z_set(d, eps)?;
    let basis = report.z_set.clone();
    let mut predicted: Vec<usize> = match (&report.rep, &report.subgroup) {
        (Some(s), Some(h)) => h.elements().iter().map(|&x| g.mul(*s, x)).collect(),
        _ => Vec::new(),
    };
    predicted.sort_unstable();
    let fixed = Subspace::coordinate(g.order(), &basis, eps);
    let matches = if basis.is_empty() { fixed.dim() == 0 } else { basis == predicted };
    Ok(VnFixedReport { dim: basis.len(), basis, predicted, matches, fixed })
}

/// `max_s |ω(s t₀) − ω(s) ω(t₀)|`, which vanishes for positive definite
/// `ω` with `ω(e) = 1` whenever `|ω(t₀)| = 1`.
pub fn multiplicative_domain_residual(d: &DualFunction, t0: usize) -> Result<f64> {
    let g = d.group()?;
    let v = d.values();
    Ok(g.elements().map(|s| (v[g.mul(s, t0)] - v[s] * v[t0]).norm()).fold(0.0, f64::max))
}
