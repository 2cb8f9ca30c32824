use serde::Serialize;

use super::operator::convolution_matrix;
use super::structure::{extract_character, fixed_subspace};
use super::EngineOptions;
use crate::error::{Error, Result};
use crate::linalg::{column_space, Subspace};
use crate::measure::FiniteMeasure;

/// `ℓ_p` fixed points on a finite group, compared with the range of
/// `λ_p(conj(χ)·m_{G_|ω|})`.
#[derive(Clone, Debug, Serialize)]
pub struct LpReport {
    pub p: f64,
    pub dim: usize,
    pub predicted_dim: Option<usize>,
    pub angle: Option<f64>,
    pub matches: bool,
    #[serde(skip)]
    pub space: Subspace,
}

/// On a finite group every `ℓ_p` is the same vector space, so the fixed
/// space does not depend on `p`; `p` is validated and recorded.
pub fn lp_fixed_points(omega: &FiniteMeasure, p: f64, opts: &EngineOptions) -> Result<LpReport> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must be at least 1, got {p}")));
    }
    let space = fixed_subspace(omega, opts.rank_tol).subspace;
    let tv = omega.tv_norm();
    let chi = if tv > 0.0 { extract_character(omega)?.ok() } else { None };
    let (predicted_dim, angle, matches) = match chi {
        Some(chi) => {
            let projector = convolution_matrix(&FiniteMeasure::character_haar(&chi.conj()));
            let range = column_space(&projector, opts.rank_tol).subspace;
            let (eq, angle) = space.equals(&range, opts.angle_tol);
            let required = space.dim() > 0 || (tv - 1.0).abs() <= opts.angle_tol;
            (Some(range.dim()), Some(angle), eq || !required)
        }
        None => (None, None, space.dim() == 0),
    };
    Ok(LpReport { p, dim: space.dim(), predicted_dim, angle, matches, space })
}
