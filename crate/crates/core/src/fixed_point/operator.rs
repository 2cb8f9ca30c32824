use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::group::GroupTable;
use crate::linalg::CMatrix;
use crate::measure::FiniteMeasure;

/// Which side the translations act on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// `(L_ω f)(t) = Σ_s ω(s) f(st)`
    Left,
    /// `(R_ω f)(t) = Σ_s ω(s) f(ts)`
    Right,
}

/// The convolution operator of a measure as a `|G|×|G|` matrix acting on
/// functions `f: G → ℂ`.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub group: Arc<GroupTable>,
    pub entries: CMatrix,
    pub convention: Convention,
}

impl OperatorMatrix {
    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let v = nalgebra::DVector::from_column_slice(f);
        (&self.entries * v).iter().copied().collect()
    }

    /// Largest row absolute sum, the `ℓ∞ → ℓ∞` operator norm.
    pub fn row_sum_norm(&self) -> f64 {
        (0..self.entries.nrows())
            .map(|i| self.entries.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Matrix of `L_ω` (or `R_ω`).
pub fn operator_matrix(omega: &FiniteMeasure, convention: Convention) -> OperatorMatrix {
    let g = omega.group();
    let n = g.order();
    let mut m = CMatrix::zeros(n, n);
    for s in omega.support() {
        let w = omega.coeff(s);
        for t in 0..n {
            let col = match convention {
                Convention::Left => g.mul(s, t),
                Convention::Right => g.mul(t, s),
            };
            m[(t, col)] += w;
        }
    }
    OperatorMatrix { group: g.clone(), entries: m, convention }
}

/// Matrix of `f ↦ μ⋆f`, i.e. `(μ⋆f)(t) = Σ_s μ(s) f(s⁻¹t)` (the left
/// regular representation applied to `μ`).
pub fn convolution_matrix(mu: &FiniteMeasure) -> CMatrix {
    let g = mu.group();
    let n = g.order();
    let mut m = CMatrix::zeros(n, n);
    for s in mu.support() {
        let w = mu.coeff(s);
        for t in 0..n {
            m[(t, g.mul(g.inv(s), t))] += w;
        }
    }
    m
}

/// Matrix of `τ ↦ τ⋆ω` on coefficient vectors.
pub fn right_convolution_matrix(omega: &FiniteMeasure) -> CMatrix {
    let g = omega.group();
    let n = g.order();
    let mut m = CMatrix::zeros(n, n);
    for s in 0..n {
        for u in omega.support() {
            m[(g.mul(s, u), s)] += omega.coeff(u);
        }
    }
    m
}
