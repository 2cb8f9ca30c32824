use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::operator::{operator_matrix, Convention};
use super::EngineOptions;
use crate::error::{Error, Result};
use crate::group::{extend_character, right_cosets, CharacterMap, Conflict, GroupTable};
use crate::linalg::{null_space, CMatrix, RankDecision, Subspace};
use crate::measure::FiniteMeasure;

/// Numerical null space of `L_ω − I`.
pub fn fixed_subspace(omega: &FiniteMeasure, rank_tol: f64) -> RankDecision {
    let l = operator_matrix(omega, Convention::Left).entries;
    let n = l.nrows();
    null_space(&(l - CMatrix::identity(n, n)), rank_tol)
}

/// `{f : f(st) = conj(χ(s)) f(t) for s ∈ H, t ∈ G}`, one free value per
/// right coset `Ht`.
pub fn predicted_fixed_space(group: &GroupTable, chi: &CharacterMap, tol: f64) -> Subspace {
    let h = chi.domain();
    let n = group.order();
    let scale = 1.0 / (h.order() as f64).sqrt();
    let mut vectors = Vec::new();
    for coset in right_cosets(h) {
        let r = coset[0];
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for (s, value) in chi.iter() {
            v[group.mul(s, r)] = value.conj() * scale;
        }
        vectors.push(v);
    }
    let basis = CMatrix::from_fn(n, vectors.len(), |i, j| vectors[j][i]);
    // columns have disjoint supports and unit norm
    Subspace::span(&basis, tol)
}

/// Reads the phases of `ω` and extends them to a character of the subgroup
/// generated by the support; `Err` carries the conflict witness.
pub fn extract_character(omega: &FiniteMeasure) -> Result<std::result::Result<CharacterMap, Conflict>> {
    if omega.tv_norm() == 0.0 {
        return Err(Error::Precondition("extract_character needs a nonzero measure".into()));
    }
    extend_character(omega.group(), &omega.polar_phase())
}

/// `max_g |ω(g) − χ(g)|ω(g)||` (χ taken as zero off its domain).
pub fn polar_fit_residual(omega: &FiniteMeasure, chi: &CharacterMap) -> f64 {
    omega
        .coeffs()
        .iter()
        .enumerate()
        .map(|(g, c)| {
            let fit = chi.value(g).map_or(Complex64::new(0.0, 0.0), |v| v * c.norm());
            (c - fit).norm()
        })
        .fold(0.0, f64::max)
}

/// Outcome of the character-factorization and fixed-space checks.
#[derive(Clone, Debug, Serialize)]
pub struct FixedPointReport {
    pub dim_fix: usize,
    pub dim_abs_fix: usize,
    pub character: Option<CharacterMap>,
    pub conflict: Option<Conflict>,
    /// A nonzero fixed space comes with `ω = χ|ω|`.
    pub factorization_ok: bool,
    /// `Fix L_ω = conj(ψ)·Fix L_|ω|` for the coset extension `ψ` of `χ`.
    pub transport_ok: bool,
    /// `Fix L_ω` equals the predicted coset-twisted space.
    pub structural_match: bool,
    /// A conflict forces `Fix L_ω = {0}`.
    pub no_character_consistent: bool,
    pub near_threshold: bool,
    pub residuals: BTreeMap<String, f64>,
}

impl FixedPointReport {
    pub fn passes(&self) -> bool {
        self.factorization_ok && self.transport_ok && self.structural_match && self.no_character_consistent
    }
}

/// Verifies, for one contractive measure on a finite group, that fixed
/// points force a character factorization `ω = χ|ω|`, that the fixed space
/// is the twist of `Fix L_|ω|` by `conj(χ)`, and that it matches
/// `{f : f(st) = conj(χ(s)) f(t), s ∈ G_|ω|}`.
pub fn verify_fixed_points(omega: &FiniteMeasure, opts: &EngineOptions) -> Result<FixedPointReport> {
    let tv = omega.tv_norm();
    if tv > 1.0 + opts.angle_tol {
        return Err(Error::Precondition(format!("measure is not contractive: ‖ω‖ = {tv}")));
    }
    let mut residuals = BTreeMap::new();
    let fix = fixed_subspace(omega, opts.rank_tol);
    let abs_fix = fixed_subspace(&omega.absolute_value(), opts.rank_tol);
    let dim_fix = fix.subspace.dim();
    residuals.insert("fix_orthonormality".into(), fix.subspace.orthonormality_residual());

    let (character, conflict) = if tv == 0.0 {
        (None, None)
    } else {
        match extract_character(omega)? {
            Ok(chi) => (Some(chi), None),
            Err(c) => (None, Some(c)),
        }
    };

    let mut factorization_ok = dim_fix == 0;
    let mut transport_ok = dim_fix == 0;
    let mut structural_match = dim_fix == 0;
    if let Some(chi) = &character {
        let polar = polar_fit_residual(omega, chi);
        residuals.insert("polar_fit".into(), polar);
        factorization_ok = dim_fix == 0 || polar <= opts.polar_tol;

        let psi: Vec<Complex64> = chi.coset_extension().iter().map(|v| v.conj()).collect();
        let transported = abs_fix.subspace.pointwise_multiply(&psi);
        let (eq, angle) = fix.subspace.equals(&transported, opts.angle_tol);
        residuals.insert("transport_angle".into(), angle);
        transport_ok = dim_fix == 0 || eq;

        let predicted = predicted_fixed_space(omega.group(), chi, opts.rank_tol);
        let (eq, angle) = fix.subspace.equals(&predicted, opts.angle_tol);
        residuals.insert("structural_angle".into(), angle);
        residuals.insert("predicted_dim".into(), predicted.dim() as f64);
        // with ‖ω‖ = 1 the predicted space is always inside Fix L_ω
        structural_match = if (tv - 1.0).abs() <= opts.angle_tol { eq } else { dim_fix == 0 || eq };
    }
    let no_character_consistent = conflict.is_none() || dim_fix == 0;

    Ok(FixedPointReport {
        dim_fix,
        dim_abs_fix: abs_fix.subspace.dim(),
        character,
        conflict,
        factorization_ok,
        transport_ok,
        structural_match,
        no_character_consistent,
        near_threshold: fix.near_threshold,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{characters_of, Subgroup};
    use crate::measure::{parse_finite_literal, random_contractive, PhaseStyle, Profile};
    use std::sync::Arc;

    fn group(spec: &str) -> Arc<GroupTable> {
        Arc::new(GroupTable::parse(spec).unwrap())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fixed_subspace_examples() {
        let z4 = group("cyclic:4");
        assert_eq!(fixed_subspace(&FiniteMeasure::delta(&z4, 0), 1e-10).subspace.dim(), 4);
        let w = parse_finite_literal(&z4, "0:0.5, 2:-0.5").unwrap();
        let fix = fixed_subspace(&w, 1e-10).subspace;
        assert_eq!(fix.dim(), 2);
        // spanned by f with f(t+2) = -f(t)
        for v in fix.vectors() {
            for t in 0..4 {
                assert!((v[(t + 2) % 4] + v[t]).norm() < 1e-12);
            }
        }
        let minus = FiniteMeasure::delta(&z4, 0).scale(c(-1.0, 0.0));
        assert_eq!(fixed_subspace(&minus, 1e-10).subspace.dim(), 0);
    }

    #[test]
    fn predicted_space_examples() {
        let z4 = group("cyclic:4");
        let h = Subgroup::new(z4.clone(), [0, 2]).unwrap();
        let chi = CharacterMap::new(h, vec![c(1.0, 0.0), c(-1.0, 0.0)], 1e-12).unwrap();
        assert_eq!(predicted_fixed_space(&z4, &chi, 1e-10).dim(), 2);
        let trivial = CharacterMap::trivial(Subgroup::trivial(&z4));
        assert_eq!(predicted_fixed_space(&z4, &trivial, 1e-10).dim(), 4);
        let constants = predicted_fixed_space(&z4, &CharacterMap::trivial(Subgroup::whole(&z4)), 1e-10);
        assert_eq!(constants.dim(), 1);
        assert!(constants.distance_to(&[c(1.0, 0.0); 4]) < 1e-12);
    }

    #[test]
    fn extract_character_examples() {
        let z4 = group("cyclic:4");
        let chi = extract_character(&parse_finite_literal(&z4, "0:0.5, 2:-0.5").unwrap()).unwrap().unwrap();
        assert_eq!(chi.domain().elements(), &[0, 2]);
        assert_eq!(chi.value(2), Some(c(-1.0, 0.0)));
        assert!(extract_character(&parse_finite_literal(&z4, "1:0.5, 3:-0.5").unwrap()).unwrap().is_err());
        let p = parse_finite_literal(&z4, "1:0.25, 2:0.75").unwrap();
        let chi = extract_character(&p).unwrap().unwrap();
        assert!(chi.domain().is_whole() && chi.is_trivial(0.0));
        assert!(extract_character(&FiniteMeasure::zero(&z4)).is_err());
    }

    #[test]
    fn verify_examples() {
        let opts = EngineOptions::default();
        let z4 = group("cyclic:4");
        let report = verify_fixed_points(&parse_finite_literal(&z4, "1:0.5, 3:-0.5").unwrap(), &opts).unwrap();
        assert_eq!(report.dim_fix, 0);
        assert!(report.conflict.is_some() && report.passes());

        let s3 = group("symmetric:3");
        // transposition [0 2 1] (index 1) and 3-cycle [1 2 0] (index 3)
        let w = parse_finite_literal(&s3, "1:0.5, 3:0.5").unwrap();
        assert!(w.adaptedness().nondegenerate);
        let report = verify_fixed_points(&w, &opts).unwrap();
        assert_eq!(report.dim_fix, 1);
        assert!(report.passes());

        for h_elems in [vec![0, 2], vec![0, 1, 2, 3]] {
            let h = Subgroup::new(z4.clone(), h_elems).unwrap();
            for chi in characters_of(&h) {
                let w = random_contractive(&z4, 3, &Profile::new(PhaseStyle::CharacterTwisted(chi), 1.0));
                let report = verify_fixed_points(&w, &opts).unwrap();
                assert!(report.passes() && report.factorization_ok && report.structural_match);
                assert_eq!(report.dim_fix, 4 / h.order());
            }
        }
    }

    #[test]
    fn subnormalised_twist_has_no_fixed_points() {
        let z4 = group("cyclic:4");
        let w = parse_finite_literal(&z4, "0:0.4, 2:-0.4").unwrap();
        let report = verify_fixed_points(&w, &EngineOptions::default()).unwrap();
        assert_eq!(report.dim_fix, 0);
        assert!(report.character.is_some() && report.passes());
    }
}
