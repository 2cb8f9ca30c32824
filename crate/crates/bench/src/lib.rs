//! Shared inputs for the criterion benchmarks in `benches/`.

use std::sync::Arc;

use convfix_core::measure::{random_contractive, seeded_profile, PhaseStyle, Profile, ProfileKind};
use convfix_core::{FiniteMeasure, GroupTable};

/// Groups the benchmarks sweep over, smallest first.
pub const GROUPS: [&str; 4] = ["cyclic:12", "dihedral:8", "symmetric:4", "product(cyclic:6,symmetric:3)"];

/// A dense complex measure on `spec` with a fixed seed.
pub fn sample_measure(spec: &str, seed: u64) -> FiniteMeasure {
    let g = Arc::new(GroupTable::parse(spec).expect("benchmark group specs are valid"));
    random_contractive(&g, seed, &Profile::new(PhaseStyle::Complex, 0.6))
}

/// A twisted probability on `spec`, which has nontrivial fixed points.
pub fn twisted_measure(spec: &str, seed: u64) -> FiniteMeasure {
    let g = Arc::new(GroupTable::parse(spec).expect("benchmark group specs are valid"));
    random_contractive(&g, seed, &seeded_profile(&g, ProfileKind::CharacterTwisted, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_build() {
        for spec in GROUPS {
            assert!(sample_measure(spec, 1).tv_norm() <= 1.0 + 1e-12);
            assert!((twisted_measure(spec, 1).tv_norm() - 1.0).abs() < 1e-12);
        }
    }
}
