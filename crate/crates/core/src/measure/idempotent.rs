use serde::Serialize;

use super::{ComplexMeasure, FiniteMeasure};
use crate::error::Result;
use crate::group::{extend_character_with_tol, CharacterMap, Subgroup};

/// `‖ω⋆ω − ω‖`.
pub fn idempotency_residual(omega: &ComplexMeasure) -> Result<f64> {
    match omega {
        ComplexMeasure::Finite(w) => Ok(w.convolve(w)?.tv_distance(w)?),
        ComplexMeasure::Lattice(w) => Ok(w.convolve(w)?.sub(w).tv_norm()),
    }
}

pub fn is_idempotent(omega: &FiniteMeasure, eps: f64) -> bool {
    idempotency_residual(&ComplexMeasure::Finite(omega.clone())).map_or(false, |r| r <= eps)
}

/// Result of fitting an idempotent to the form `χ·m_H`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    Greenleaf {
        subgroup: Subgroup,
        character: CharacterMap,
        fit_residual: f64,
    },
    NotGreenleafForm { reason: String },
    NotIdempotent { residual: f64 },
}

/// Recovers `(H, χ)` with `ω = χ·m_H` from an idempotent measure.
///
/// `H` is read off as the support and `χ` from the phases via
/// [`extend_character_with_tol`]; no least-squares fitting is involved.
pub fn classify_idempotent(omega: &FiniteMeasure, eps: f64) -> Classification {
    let residual = idempotency_residual(&ComplexMeasure::Finite(omega.clone())).expect("same carrier");
    if residual > eps {
        return Classification::NotIdempotent { residual };
    }
    let group = omega.group();
    let support = omega.support_above(eps);
    let subgroup = match Subgroup::new(group.clone(), support.iter().copied()) {
        Ok(h) => h,
        Err(e) => return Classification::NotGreenleafForm { reason: format!("support is not a subgroup: {e}") },
    };
    let weight = 1.0 / subgroup.order() as f64;
    if let Some(&g) = support.iter().find(|&&g| (omega.coeff(g).norm() - weight).abs() > eps) {
        return Classification::NotGreenleafForm {
            reason: format!("|ω({g})| = {} differs from 1/|H| = {weight}", omega.coeff(g).norm()),
        };
    }
    let phases = omega
        .polar_phase()
        .into_iter()
        .filter(|(g, _)| subgroup.contains(*g))
        .collect();
    let character = match extend_character_with_tol(group, &phases, eps.max(crate::group::PHASE_TOL)) {
        Ok(Ok(chi)) => chi,
        Ok(Err(conflict)) => {
            return Classification::NotGreenleafForm { reason: format!("phases are not a character: {conflict}") }
        }
        Err(e) => return Classification::NotGreenleafForm { reason: e.to_string() },
    };
    let fitted = FiniteMeasure::character_haar(&character);
    let fit_residual = fitted.tv_distance(omega).expect("same carrier");
    if character.domain().elements() != subgroup.elements() || fit_residual > eps {
        return Classification::NotGreenleafForm { reason: format!("χ·m_H misses ω by {fit_residual:e}") };
    }
    Classification::Greenleaf { subgroup, character, fit_residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{all_subgroups, characters_of, GroupSpec, GroupTable};
    use crate::measure::parse_finite_literal;
    use num_complex::Complex64;
    use std::sync::Arc;

    fn group(spec: &str) -> Arc<GroupTable> {
        Arc::new(GroupTable::parse(spec).unwrap())
    }

    #[test]
    fn idempotence_examples() {
        let z4 = group("cyclic:4");
        let h = Subgroup::new(z4.clone(), [0, 2]).unwrap();
        assert!(is_idempotent(&FiniteMeasure::haar(&h), 1e-12));
        assert!(is_idempotent(&parse_finite_literal(&z4, "0:0.5, 2:-0.5").unwrap(), 1e-12));
        let w = parse_finite_literal(&z4, "0:0.5, 1:0.5").unwrap();
        assert!(!is_idempotent(&w, 1e-9));
        // (δ₀+δ₁)²/4 = (δ₀ + 2δ₁ + δ₂)/4, so the defect has mass at 2
        let sq = w.convolve(&w).unwrap();
        assert_eq!(sq.coeff(2), Complex64::new(0.25, 0.0));
    }

    #[test]
    fn classify_examples() {
        let z4 = group("cyclic:4");
        match classify_idempotent(&FiniteMeasure::haar(&Subgroup::whole(&z4)), 1e-9) {
            Classification::Greenleaf { subgroup, character, .. } => {
                assert!(subgroup.is_whole());
                assert!(character.is_trivial(1e-15));
            }
            other => panic!("{other:?}"),
        }
        match classify_idempotent(&parse_finite_literal(&z4, "0:0.5, 2:-0.5").unwrap(), 1e-9) {
            Classification::Greenleaf { subgroup, character, .. } => {
                assert_eq!(subgroup.elements(), &[0, 2]);
                assert_eq!(character.value(2), Some(Complex64::new(-1.0, 0.0)));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            classify_idempotent(&parse_finite_literal(&z4, "0:0.5, 1:0.5").unwrap(), 1e-9),
            Classification::NotIdempotent { .. }
        ));
    }

    #[test]
    fn non_contractive_idempotent_is_not_greenleaf() {
        // δ_e − m_G is idempotent with norm 2(n−1)/n
        let z4 = group("cyclic:4");
        let w = FiniteMeasure::delta(&z4, 0).sub(&FiniteMeasure::haar(&Subgroup::whole(&z4))).unwrap();
        assert!(matches!(classify_idempotent(&w, 1e-9), Classification::NotGreenleafForm { .. }));
    }

    #[test]
    fn every_character_haar_is_recovered() {
        for spec in GroupSpec::builtins() {
            let g = Arc::new(GroupTable::build(&spec).unwrap());
            for h in all_subgroups(&g) {
                for chi in characters_of(&h) {
                    match classify_idempotent(&FiniteMeasure::character_haar(&chi), 1e-9) {
                        Classification::Greenleaf { subgroup, character, .. } => {
                            assert_eq!(subgroup.elements(), h.elements());
                            assert!(character.distance(&chi) <= 1e-12);
                        }
                        other => panic!("{spec}: {other:?}"),
                    }
                }
            }
        }
    }
}
