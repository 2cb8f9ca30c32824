//! The operator `L_ω` as an explicit matrix, numerical fixed-point spaces,
//! and the structural checks built on them: character factorisation,
//! coset-twisted function spaces, the ideal `I_ω`, `L_p` fixed points,
//! representation fixed points and the equivalence suite.

mod equivalence;
mod ideal;
mod lattice;
mod lp;
mod operator;
mod projection;
mod representation;
mod structure;

use serde::{Deserialize, Serialize};

pub use crate::linalg::{RankDecision, Subspace};
pub use equivalence::{equivalence_suite, EquivalenceReport};
pub use ideal::{ideal_subspace, IdealReport};
pub use lattice::{lp_lattice_decay, mukherjea_lattice, mukherjea_lattice_capped, LatticeDecayReport, MukherjeaReport};
pub use lp::{lp_fixed_points, LpReport};
pub use operator::{convolution_matrix, operator_matrix, right_convolution_matrix, Convention, OperatorMatrix};
pub use projection::{cesaro_projection_check, ProjectionReport};
pub use representation::{representation_fixed_points, Representation, RepresentationReport};
pub use structure::{
    extract_character, fixed_subspace, polar_fit_residual, predicted_fixed_space, verify_fixed_points,
    FixedPointReport,
};

use crate::measure::CesaroOptions;

/// Tolerances shared by the fixed-point checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineOptions {
    /// Relative singular-value threshold for rank decisions.
    pub rank_tol: f64,
    /// Largest principal angle accepted when comparing subspaces.
    pub angle_tol: f64,
    /// Accepted `max |ω − χ|ω||`.
    pub polar_tol: f64,
    pub cesaro: CesaroOptions,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self { rank_tol: crate::linalg::RANK_TOL, angle_tol: 1e-8, polar_tol: 1e-10, cesaro: CesaroOptions::default() }
    }
}

/// `(dim A = dim B and max principal angle ≤ tol, max principal angle)`.
pub fn subspace_equal(a: &Subspace, b: &Subspace, tol: f64) -> (bool, f64) {
    a.equals(b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn subspace_equal_examples() {
        let consts = Subspace::span_of(4, &[vec![c(1.0); 4]], 1e-10);
        let (eq, angle) = subspace_equal(&consts, &consts, 1e-12);
        assert!(eq && angle < 1e-15);
        let alt = Subspace::span_of(
            4,
            &[vec![c(1.0), c(0.0), c(-1.0), c(0.0)], vec![c(0.0), c(1.0), c(0.0), c(-1.0)]],
            1e-10,
        );
        assert!(!subspace_equal(&consts, &alt, 1e-8).0);
        let rotated = Subspace::span(
            &CMatrix::from_row_slice(4, 2, &[c(1.0), c(1.0), c(1.0), c(-1.0), c(-1.0), c(-1.0), c(-1.0), c(1.0)]),
            1e-10,
        );
        let (eq, angle) = subspace_equal(&alt, &rotated, 1e-12);
        assert!(eq, "angle {angle}");
    }
}
