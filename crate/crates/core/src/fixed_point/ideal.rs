use serde::Serialize;

use super::structure::fixed_subspace;
use super::EngineOptions;
use crate::linalg::{CMatrix, Subspace};
use crate::measure::FiniteMeasure;

/// The right ideal `I_ω = span{f − ω⋆f}` and its relation to `Fix L_ω`.
#[derive(Clone, Debug, Serialize)]
pub struct IdealReport {
    pub dim_ideal: usize,
    pub dim_fix: usize,
    /// `dim I_ω + dim Fix L_ω = |G|`.
    pub dims_sum_ok: bool,
    /// The bilinear annihilator of `I_ω` equals `Fix L_ω`.
    pub annihilator_ok: bool,
    pub annihilator_angle: f64,
    /// For probability measures: `I_ω ⊆ ℓ¹₀`, with the largest `|Σ v|` over
    /// the orthonormal basis of `I_ω`.
    pub augmentation_residual: Option<f64>,
    #[serde(skip)]
    pub ideal: Subspace,
}

impl IdealReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.dims_sum_ok && self.annihilator_ok && self.augmentation_residual.map_or(true, |r| r <= tol)
    }
}

/// Spans `{δ_g − ω⋆δ_g : g ∈ G}` and compares its annihilator under
/// `⟨f, φ⟩ = Σ f(g)φ(g)` with `Fix L_ω`.
pub fn ideal_subspace(omega: &FiniteMeasure, opts: &EngineOptions) -> IdealReport {
    let g = omega.group();
    let n = g.order();
    // column g is δ_g − ω⋆δ_g, and (ω⋆δ_g)(t) = ω(t g⁻¹)
    let m = CMatrix::from_fn(n, n, |t, col| {
        let delta = if t == col { 1.0 } else { 0.0 };
        num_complex::Complex64::new(delta, 0.0) - omega.coeff(g.mul(t, g.inv(col)))
    });
    let ideal = Subspace::span(&m, opts.rank_tol);
    let fix = fixed_subspace(omega, opts.rank_tol).subspace;
    let annihilator = ideal.bilinear_annihilator();
    let (annihilator_ok, annihilator_angle) = annihilator.equals(&fix, opts.angle_tol);
    let augmentation_residual = omega.is_probability(opts.rank_tol).then(|| {
        ideal
            .vectors()
            .iter()
            .map(|v| v.iter().sum::<num_complex::Complex64>().norm())
            .fold(0.0, f64::max)
    });
    IdealReport {
        dim_ideal: ideal.dim(),
        dim_fix: fix.dim(),
        dims_sum_ok: ideal.dim() + fix.dim() == n,
        annihilator_ok,
        annihilator_angle,
        augmentation_residual,
        ideal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupSpec, GroupTable, Subgroup};
    use crate::measure::{random_contractive, PhaseStyle, Profile};
    use std::sync::Arc;

    fn group(spec: &str) -> Arc<GroupTable> {
        Arc::new(GroupTable::parse(spec).unwrap())
    }

    #[test]
    fn identity_has_zero_ideal() {
        let z4 = group("cyclic:4");
        let r = ideal_subspace(&FiniteMeasure::delta(&z4, 0), &EngineOptions::default());
        assert_eq!((r.dim_ideal, r.dim_fix), (0, 4));
        assert!(r.passes(1e-12));
    }

    #[test]
    fn haar_on_z2_gives_augmentation_ideal() {
        let z2 = group("cyclic:2");
        let r = ideal_subspace(&FiniteMeasure::haar(&Subgroup::whole(&z2)), &EngineOptions::default());
        assert_eq!((r.dim_ideal, r.dim_fix), (1, 1));
        assert!(r.passes(1e-12));
        assert!(r.ideal.distance_to(&[num_complex::Complex64::new(1.0, 0.0), num_complex::Complex64::new(-1.0, 0.0)]) < 1e-12);
    }

    #[test]
    fn rotation_on_z4_gives_maximal_ideal() {
        let z4 = group("cyclic:4");
        let r = ideal_subspace(&FiniteMeasure::delta(&z4, 1), &EngineOptions::default());
        assert_eq!(r.dim_ideal, 3);
        assert!(r.augmentation_residual.unwrap() < 1e-12 && r.passes(1e-12));
    }

    #[test]
    fn dimensions_always_add_up() {
        for spec in GroupSpec::builtins() {
            let g = Arc::new(GroupTable::build(&spec).unwrap());
            for seed in 0..20 {
                let w = random_contractive(&g, seed, &Profile::new(PhaseStyle::RealSigned, 0.4));
                let r = ideal_subspace(&w, &EngineOptions::default());
                assert!(r.passes(1e-10), "{spec} seed {seed}: {r:?}");
            }
        }
    }
}
