use serde::Serialize;

use super::operator::right_convolution_matrix;
use super::structure::fixed_subspace;
use super::EngineOptions;
use crate::error::{Error, Result};
use crate::linalg::{null_space, CMatrix};
use crate::measure::{cesaro_limit, idempotency_residual, CesaroVerdict, ComplexMeasure, FiniteMeasure};

/// The equivalent conditions for a contractive measure on a finite group.
/// `None` means the Cesàro run was undecided.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    /// (i) `S_n(ω)` does not tend to zero.
    pub cesaro_nonzero: Option<bool>,
    /// (ii) the limit `ω̃` is a nonzero idempotent.
    pub limit_nonzero_idempotent: Option<bool>,
    /// (iii), (iv) `L_ω` has a nonzero fixed point.
    pub has_fixed_point: bool,
    /// (v) some nonzero `τ` has `τ⋆ω = τ`.
    pub has_left_fixed_measure: bool,
    pub all_equal: bool,
}

pub fn equivalence_suite(omega: &FiniteMeasure, opts: &EngineOptions) -> Result<EquivalenceReport> {
    let tv = omega.tv_norm();
    if tv > 1.0 + opts.angle_tol {
        return Err(Error::Precondition(format!("measure is not contractive: ‖ω‖ = {tv}")));
    }
    let trace = cesaro_limit(&ComplexMeasure::Finite(omega.clone()), &opts.cesaro)?;
    let (cesaro_nonzero, limit_nonzero_idempotent) = match &trace.verdict {
        CesaroVerdict::ConvergedTo(limit) => {
            let idem = limit.tv_norm() > opts.cesaro.eps
                && idempotency_residual(limit)? <= 10.0 * opts.cesaro.eps;
            (Some(true), Some(idem))
        }
        CesaroVerdict::ConvergedToZero => (Some(false), Some(false)),
        CesaroVerdict::Undecided => (None, None),
    };
    let has_fixed_point = fixed_subspace(omega, opts.rank_tol).subspace.dim() > 0;
    let n = omega.group().order();
    let predual = right_convolution_matrix(omega) - CMatrix::identity(n, n);
    let has_left_fixed_measure = null_space(&predual, opts.rank_tol).subspace.dim() > 0;

    let decided = [cesaro_nonzero, limit_nonzero_idempotent].into_iter().flatten();
    let all_equal = decided
        .chain([has_left_fixed_measure])
        .all(|b| b == has_fixed_point);
    Ok(EquivalenceReport { cesaro_nonzero, limit_nonzero_idempotent, has_fixed_point, has_left_fixed_measure, all_equal })
}
