use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{make_dual, DualFunction};
use crate::group::{all_subgroups, characters_of, right_cosets, GroupTable};

/// Seeded contractive element of `B(G)` of the form
/// `c·(a·χ1_H + (1 − a)·⟨ξ, λ(·)ξ⟩)`.
///
/// `χ1_H` is a character of a random subgroup extended by zero, `ξ` a
/// random unit vector constant on the right cosets of another random
/// subgroup, and `c` unimodular. Both summands are positive definite with
/// value 1 at `e`, so the blend has norm 1. Half of the draws take
/// `c = conj(ω₀(s₀))` for a random `s₀` with `|ω₀(s₀)| = 1`, which makes
/// `s₀ ∈ Z_ω`; the rest take a random phase.
pub fn random_dual(group: &Arc<GroupTable>, seed: u64) -> DualFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subgroups = all_subgroups(group);
    let n = group.order();

    let h = &subgroups[rng.random_range(0..subgroups.len())];
    let chars = characters_of(h);
    let chi = &chars[rng.random_range(0..chars.len())];
    let mut pure = vec![Complex64::new(0.0, 0.0); n];
    for (s, v) in chi.iter() {
        pure[s] = v;
    }

    let k = &subgroups[rng.random_range(0..subgroups.len())];
    let mut xi = vec![Complex64::new(0.0, 0.0); n];
    for coset in right_cosets(k) {
        let v = Complex64::from_polar(rng.random::<f64>(), rng.random_range(0.0..std::f64::consts::TAU));
        for t in coset {
            xi[t] = v;
        }
    }
    let norm = xi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        xi.iter_mut().for_each(|z| *z /= norm);
    } else {
        xi = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    }
    // ⟨ξ, λ(g)ξ⟩ = Σ_t conj(ξ(t)) ξ(g⁻¹t)
    let coefficient: Vec<Complex64> = group
        .elements()
        .map(|g| group.elements().map(|t| xi[t].conj() * xi[group.mul(group.inv(g), t)]).sum())
        .collect();

    let a = match rng.random_range(0..3) {
        0 => 1.0,
        1 => 0.0,
        _ => rng.random::<f64>(),
    };
    let blend: Vec<Complex64> = pure.iter().zip(&coefficient).map(|(p, q)| p * a + q * (1.0 - a)).collect();

    let unimodular: Vec<usize> = group.elements().filter(|&g| (blend[g].norm() - 1.0).abs() < 1e-12).collect();
    let c = if rng.random_bool(0.5) && !unimodular.is_empty() {
        let s0 = unimodular[rng.random_range(0..unimodular.len())];
        blend[s0].conj() / blend[s0].norm()
    } else {
        Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
    };
    let values = blend.iter().map(|v| v * c).collect();
    make_dual(group, values).expect("one value per element")
}
