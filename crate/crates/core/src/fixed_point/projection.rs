use std::collections::BTreeMap;

use serde::Serialize;

use super::operator::{operator_matrix, Convention};
use super::structure::fixed_subspace;
use super::EngineOptions;
use crate::error::{Error, Result};
use crate::linalg::{column_space, spectral_norm};
use crate::measure::{cesaro_limit, CesaroVerdict, ComplexMeasure, FiniteMeasure};

/// Checks that the Cesàro limit `ω̃` acts as a projection onto `Fix L_ω`.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectionReport {
    pub verdict: String,
    pub dim_fix: usize,
    pub projection_ok: bool,
    pub range_ok: bool,
    pub limit_fix_ok: bool,
    pub residuals: BTreeMap<String, f64>,
}

impl ProjectionReport {
    pub fn passes(&self) -> bool {
        self.projection_ok && self.range_ok && self.limit_fix_ok
    }
}

/// For a converged limit `ω̃`: `L_ω̃² = L_ω̃`, `Ran L_ω̃ = Fix L_ω` and
/// `Fix L_ω̃ = Fix L_ω`. For a zero limit: `Fix L_ω = {0}`.
pub fn cesaro_projection_check(omega: &FiniteMeasure, opts: &EngineOptions) -> Result<ProjectionReport> {
    let trace = cesaro_limit(&ComplexMeasure::Finite(omega.clone()), &opts.cesaro)?;
    let fix = fixed_subspace(omega, opts.rank_tol).subspace;
    let mut residuals = BTreeMap::new();
    match &trace.verdict {
        CesaroVerdict::Undecided => {
            Err(Error::Precondition("Cesàro run ended undecided; raise n_max or loosen eps".into()))
        }
        CesaroVerdict::ConvergedToZero => Ok(ProjectionReport {
            verdict: trace.verdict.label().into(),
            dim_fix: fix.dim(),
            projection_ok: true,
            range_ok: fix.dim() == 0,
            limit_fix_ok: fix.dim() == 0,
            residuals,
        }),
        CesaroVerdict::ConvergedTo(limit) => {
            let limit = limit.as_finite()?;
            let l = operator_matrix(limit, Convention::Left).entries;
            let defect = spectral_norm(&(&l * &l - &l));
            residuals.insert("projection_defect".into(), defect);
            let range = column_space(&l, opts.rank_tol).subspace;
            let (range_ok, range_angle) = range.equals(&fix, opts.angle_tol);
            residuals.insert("range_angle".into(), range_angle);
            let limit_fix = fixed_subspace(limit, opts.rank_tol).subspace;
            let (limit_fix_ok, fix_angle) = limit_fix.equals(&fix, opts.angle_tol);
            residuals.insert("limit_fix_angle".into(), fix_angle);
            Ok(ProjectionReport {
                verdict: trace.verdict.label().into(),
                dim_fix: fix.dim(),
                projection_ok: defect <= 10.0 * opts.cesaro.eps,
                range_ok,
                limit_fix_ok,
                residuals,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupTable, Subgroup};
    use crate::measure::parse_finite_literal;
    use num_complex::Complex64;
    use std::sync::Arc;

    #[test]
    fn rotation_projects_onto_constants() {
        let z4 = Arc::new(GroupTable::parse("cyclic:4").unwrap());
        let report = cesaro_projection_check(&FiniteMeasure::delta(&z4, 1), &EngineOptions::default()).unwrap();
        assert_eq!(report.verdict, "converged");
        assert_eq!(report.dim_fix, 1);
        assert!(report.passes(), "{report:?}");
    }

    #[test]
    fn minus_identity_has_zero_limit() {
        let z4 = Arc::new(GroupTable::parse("cyclic:4").unwrap());
        let w = FiniteMeasure::delta(&z4, 0).scale(Complex64::new(-1.0, 0.0));
        let report = cesaro_projection_check(&w, &EngineOptions::default()).unwrap();
        assert_eq!(report.verdict, "zero");
        assert_eq!(report.dim_fix, 0);
        assert!(report.passes());
    }

    #[test]
    fn idempotent_is_its_own_limit() {
        let z4 = Arc::new(GroupTable::parse("cyclic:4").unwrap());
        for w in [
            parse_finite_literal(&z4, "0:0.5, 2:-0.5").unwrap(),
            FiniteMeasure::haar(&Subgroup::new(z4.clone(), [0, 2]).unwrap()),
        ] {
            let report = cesaro_projection_check(&w, &EngineOptions::default()).unwrap();
            assert!(report.passes() && report.residuals["projection_defect"] < 1e-14);
            assert_eq!(report.dim_fix, 2);
        }
    }

    #[test]
    fn undecided_run_is_a_precondition_error() {
        let z4 = Arc::new(GroupTable::parse("cyclic:4").unwrap());
        let w = FiniteMeasure::delta(&z4, 0).scale(Complex64::from_polar(1.0, 2f64.sqrt()));
        assert!(matches!(cesaro_projection_check(&w, &EngineOptions::default()), Err(Error::Precondition(_))));
    }
}
