use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FiniteMeasure, LatticeMeasure};
use crate::error::{Error, Result};
use crate::group::{all_subgroups, characters_of, CharacterMap, GroupTable};

/// Phase style of a random draw.
#[derive(Clone, Debug)]
pub enum PhaseStyle {
    /// Random signs.
    RealSigned,
    /// Uniform random phases.
    Complex,
    /// `χ·p` for a random probability `p` on the domain of `χ`.
    CharacterTwisted(CharacterMap),
}

/// What to draw: phase style plus the fraction of the available support
/// that carries mass.
#[derive(Clone, Debug)]
pub struct Profile {
    pub style: PhaseStyle,
    pub density: f64,
}

impl Profile {
    pub fn new(style: PhaseStyle, density: f64) -> Self {
        Self { style, density }
    }
}

/// Named family of draws, used where a profile is chosen from a seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    RealSigned,
    Complex,
    CharacterTwisted,
}

impl ProfileKind {
    pub const ALL: [ProfileKind; 3] = [ProfileKind::RealSigned, ProfileKind::Complex, ProfileKind::CharacterTwisted];

    pub fn name(self) -> &'static str {
        match self {
            ProfileKind::RealSigned => "real-signed",
            ProfileKind::Complex => "complex",
            ProfileKind::CharacterTwisted => "character-twisted",
        }
    }
}

impl std::str::FromStr for ProfileKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProfileKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown profile `{s}`")))
    }
}

const DENSITIES: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];

/// Expands a [`ProfileKind`] into a concrete [`Profile`] using `seed`.
///
/// The density is one of 0.2, 0.4, 0.6, 0.8 or 1.0. For twisted draws the
/// subgroup is uniform among all subgroups and the character uniform among
/// its characters.
pub fn seeded_profile(group: &Arc<GroupTable>, kind: ProfileKind, seed: u64) -> Profile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let density = DENSITIES[rng.random_range(0..DENSITIES.len())];
    let style = match kind {
        ProfileKind::RealSigned => PhaseStyle::RealSigned,
        ProfileKind::Complex => PhaseStyle::Complex,
        ProfileKind::CharacterTwisted => {
            let subgroups = all_subgroups(group);
            let h = &subgroups[rng.random_range(0..subgroups.len())];
            let mut chars = characters_of(h);
            PhaseStyle::CharacterTwisted(chars.swap_remove(rng.random_range(0..chars.len())))
        }
    };
    Profile::new(style, density)
}

fn support_size(available: usize, density: f64) -> usize {
    ((density * available as f64).round() as usize).clamp(1, available)
}

/// Seeded random measure of total variation one.
///
/// Deterministic for a fixed `(group, seed, profile)`: the generator is
/// ChaCha8 seeded from `seed`, the support is a uniform subset of the
/// requested size, and weights are uniform on `(0, 1]` before
/// normalisation.
pub fn random_contractive(group: &Arc<GroupTable>, seed: u64, profile: &Profile) -> FiniteMeasure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain: Vec<usize> = match &profile.style {
        PhaseStyle::CharacterTwisted(chi) => chi.domain().elements().to_vec(),
        _ => group.elements().collect(),
    };
    let k = support_size(domain.len(), profile.density);
    let mut picked: Vec<usize> = sample(&mut rng, domain.len(), k).into_iter().map(|i| domain[i]).collect();
    picked.sort_unstable();

    let mut atoms = Vec::with_capacity(k);
    for &g in &picked {
        let weight = 1.0 - rng.random::<f64>();
        let phase = match &profile.style {
            PhaseStyle::RealSigned => {
                if rng.random_bool(0.5) {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(-1.0, 0.0)
                }
            }
            PhaseStyle::Complex => Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)),
            PhaseStyle::CharacterTwisted(chi) => chi.value(g).expect("support inside the domain"),
        };
        atoms.push((g, weight, phase));
    }
    let total: f64 = atoms.iter().map(|(_, w, _)| w).sum();
    let atoms: Vec<(usize, Complex64)> = atoms.into_iter().map(|(g, w, p)| (g, p * (w / total))).collect();
    FiniteMeasure::from_atoms(group, &atoms).expect("elements are in range")
}

/// Seeded random measure of total variation one on `[-radius, radius]`.
pub fn random_lattice(seed: u64, radius: i64, density: f64, style: &PhaseStyle) -> LatticeMeasure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = (2 * radius + 1) as usize;
    let k = support_size(width, density);
    let mut picked: Vec<i64> = sample(&mut rng, width, k).into_iter().map(|i| i as i64 - radius).collect();
    picked.sort_unstable();
    let mut atoms = Vec::with_capacity(k);
    for n in picked {
        let weight = 1.0 - rng.random::<f64>();
        let phase = match style {
            PhaseStyle::RealSigned if rng.random_bool(0.5) => Complex64::new(-1.0, 0.0),
            PhaseStyle::Complex => Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)),
            _ => Complex64::new(1.0, 0.0),
        };
        atoms.push((n, weight, phase));
    }
    let total: f64 = atoms.iter().map(|(_, w, _)| w).sum();
    LatticeMeasure::new(atoms.into_iter().map(|(n, w, p)| (n, p * (w / total))))
}
