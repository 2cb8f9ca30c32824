use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{dual_group, subgroup_closure, DualGroup, GroupTable};
use crate::measure::FiniteMeasure;

/// `μ̂(χ) = Σ_s conj(χ(s)) μ(s)`, indexed by the characters of
/// [`dual_group`].
pub fn fourier_transform(mu: &FiniteMeasure) -> Result<Vec<Complex64>> {
    let dual = dual_group(mu.group())?;
    Ok(transform_with(&dual, mu))
}

fn transform_with(dual: &DualGroup, mu: &FiniteMeasure) -> Vec<Complex64> {
    (0..dual.characters.len())
        .map(|k| mu.support().into_iter().map(|s| dual.pair(s, k).conj() * mu.coeff(s)).sum())
        .collect()
}

/// Writes `values = Σ_χ a_χ χ` and returns `a` as a measure on the dual
/// group.
pub fn inverse_fourier(group: &Arc<GroupTable>, values: &[Complex64]) -> Result<FiniteMeasure> {
    let dual = dual_group(group)?;
    if values.len() != group.order() {
        return Err(Error::InvalidArgument("one value per group element expected".into()));
    }
    let n = group.order() as f64;
    let coeffs = (0..dual.characters.len())
        .map(|k| group.elements().map(|g| values[g] * dual.pair(g, k).conj()).sum::<Complex64>() / n)
        .collect();
    FiniteMeasure::new(dual.group.clone(), coeffs)
}

/// `Z_{μ̂} ≠ ∅` against "the phases of `μ` are a character on its support".
#[derive(Clone, Debug, Serialize)]
pub struct AbelianPropReport {
    /// Character indices in `Z_{μ̂}`.
    pub z_set: Vec<usize>,
    /// Characters whose restriction to `supp μ` equals the phase of `μ`.
    pub matching_characters: Vec<usize>,
    pub iff_holds: bool,
    /// `G_μ^⊥`, the characters trivial on the group generated by `supp μ`.
    pub annihilator: Vec<usize>,
    /// `Z_{μ̂} = χ₀·G_μ^⊥` (vacuous when `Z_{μ̂}` is empty).
    pub coset_ok: bool,
}

impl AbelianPropReport {
    pub fn passes(&self) -> bool {
        self.iff_holds && self.coset_ok
    }
}

pub fn abelian_prop_check(mu: &FiniteMeasure, eps: f64) -> Result<AbelianPropReport> {
    let group = mu.group();
    let dual = dual_group(group)?;
    let tv = mu.tv_norm();
    if (tv - 1.0).abs() > eps {
        return Err(Error::Precondition(format!("expected ‖μ‖ = 1, got {tv}")));
    }
    let transform = transform_with(&dual, mu);
    let z_set: Vec<usize> = (0..transform.len()).filter(|&k| (transform[k] - 1.0).norm() <= eps).collect();

    let phases = mu.polar_phase();
    let matching_characters: Vec<usize> = (0..dual.characters.len())
        .filter(|&k| phases.iter().all(|(&s, p)| (dual.pair(s, k) - p).norm() <= eps))
        .collect();

    let support = mu.support();
    let generated = subgroup_closure(group, &support)?;
    let annihilator = dual.annihilator(generated.elements(), eps);
    let coset_ok = match z_set.first() {
        None => true,
        Some(&chi0) => {
            let mut coset: Vec<usize> = annihilator.iter().map(|&eta| dual.group.mul(chi0, eta)).collect();
            coset.sort_unstable();
            coset == z_set
        }
    };
    Ok(AbelianPropReport {
        iff_holds: z_set.is_empty() == matching_characters.is_empty(),
        z_set,
        matching_characters,
        annihilator,
        coset_ok,
    })
}
