use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::structure::extract_character;
use super::EngineOptions;
use crate::error::{Error, Result};
use crate::group::{permutations, GroupSpec, GroupTable};
use crate::linalg::{null_space, CMatrix, Subspace};
use crate::measure::FiniteMeasure;

const REPRESENTATION_TOL: f64 = 1e-10;

/// A unitary representation of a finite group, one matrix per element.
#[derive(Clone, Debug)]
pub struct Representation {
    group: Arc<GroupTable>,
    name: String,
    matrices: Vec<CMatrix>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Representation {
    /// Validates `π(ab) = π(a)π(b)` and unitarity on every pair.
    pub fn new(group: &Arc<GroupTable>, name: impl Into<String>, matrices: Vec<CMatrix>) -> Result<Self> {
        let name = name.into();
        if matrices.len() != group.order() {
            return Err(Error::NotHomomorphism(format!(
                "{name}: {} matrices for a group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        let d = matrices[0].nrows();
        let bad = |m: &CMatrix| m.nrows() != d || m.ncols() != d;
        if matrices.iter().any(bad) {
            return Err(Error::NotHomomorphism(format!("{name}: matrices are not all {d}×{d}")));
        }
        let max_abs = |m: CMatrix| m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for a in group.elements() {
            let unitary_defect = max_abs(matrices[a].adjoint() * &matrices[a] - CMatrix::identity(d, d));
            if unitary_defect > REPRESENTATION_TOL {
                return Err(Error::NotHomomorphism(format!("{name}: π({a}) is not unitary")));
            }
            for b in group.elements() {
                let defect = max_abs(&matrices[a] * &matrices[b] - &matrices[group.mul(a, b)]);
                if defect > REPRESENTATION_TOL {
                    return Err(Error::NotHomomorphism(format!(
                        "{name}: π({a})π({b}) differs from π({}) by {defect:e}",
                        group.mul(a, b)
                    )));
                }
            }
        }
        Ok(Self { group: group.clone(), name, matrices })
    }

    /// `π(g) = I` on `ℂ^d`.
    pub fn trivial(group: &Arc<GroupTable>, d: usize) -> Self {
        let matrices = vec![CMatrix::identity(d, d); group.order()];
        Self { group: group.clone(), name: format!("trivial^{d}"), matrices }
    }

    /// Left regular representation, `(λ(g)f)(t) = f(g⁻¹t)`.
    pub fn regular(group: &Arc<GroupTable>) -> Self {
        let n = group.order();
        let matrices = group
            .elements()
            .map(|g| {
                let mut m = CMatrix::zeros(n, n);
                for t in 0..n {
                    m[(group.mul(g, t), t)] = c(1.0, 0.0);
                }
                m
            })
            .collect();
        Self { group: group.clone(), name: "regular".into(), matrices }
    }

    /// The low-dimensional faithful irreducible representation shipped for
    /// dihedral groups (rotation and reflection of the plane), the
    /// quaternion group (Pauli-type 2×2 matrices) and symmetric groups (the
    /// standard representation on the sum-zero hyperplane).
    pub fn standard(group: &Arc<GroupTable>) -> Result<Self> {
        let spec: GroupSpec = group.name().parse()?;
        let matrices = match spec {
            GroupSpec::Dihedral(n) => {
                let theta = std::f64::consts::TAU / n as f64;
                let rot = |k: usize| {
                    let (s, co) = (theta * k as f64).sin_cos();
                    CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
                };
                let refl = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
                (0..2 * n).map(|g| if g < n { rot(g) } else { &refl * rot(g - n) }).collect()
            }
            GroupSpec::Quaternion8 => {
                let units = [
                    CMatrix::identity(2, 2),
                    CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]),
                    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]),
                    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]),
                ];
                (0..8).map(|g| if g % 2 == 0 { units[g / 2].clone() } else { -units[g / 2].clone() }).collect()
            }
            GroupSpec::Symmetric(n) if n >= 2 => {
                // orthonormal basis of the sum-zero hyperplane (Helmert vectors)
                let basis = CMatrix::from_fn(n, n - 1, |i, j| {
                    let k = j + 1;
                    let norm = ((k * (k + 1)) as f64).sqrt();
                    match i.cmp(&k) {
                        std::cmp::Ordering::Less => c(1.0 / norm, 0.0),
                        std::cmp::Ordering::Equal => c(-(k as f64) / norm, 0.0),
                        std::cmp::Ordering::Greater => c(0.0, 0.0),
                    }
                });
                permutations(n)
                    .iter()
                    .map(|p| {
                        let mut perm = CMatrix::zeros(n, n);
                        for (x, &px) in p.iter().enumerate() {
                            perm[(px, x)] = c(1.0, 0.0);
                        }
                        basis.adjoint() * perm * &basis
                    })
                    .collect()
            }
            other => {
                return Err(Error::InvalidArgument(format!("no standard representation shipped for {other}")))
            }
        };
        Self::new(group, "standard", matrices)
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrix(&self, g: usize) -> &CMatrix {
        &self.matrices[g]
    }

    /// `π(ω) = Σ_s ω(s) π(s)`.
    pub fn integrate(&self, omega: &FiniteMeasure) -> CMatrix {
        let d = self.degree();
        omega
            .support()
            .into_iter()
            .fold(CMatrix::zeros(d, d), |acc, s| acc + &self.matrices[s] * omega.coeff(s))
    }
}

/// Fixed vectors of `π(ω)` against the joint eigenspace
/// `{x : π(s)x = conj(χ(s))x, s ∈ G_|ω|}`.
#[derive(Clone, Debug, Serialize)]
pub struct RepresentationReport {
    pub representation: String,
    pub degree: usize,
    pub dim_fix: usize,
    pub predicted_dim: Option<usize>,
    pub angle: Option<f64>,
    pub matches: bool,
    #[serde(skip)]
    pub fixed: Subspace,
}

pub fn representation_fixed_points(
    pi: &Representation,
    omega: &FiniteMeasure,
    opts: &EngineOptions,
) -> Result<RepresentationReport> {
    if omega.group().table() != pi.group.table() {
        return Err(Error::CarrierMismatch { left: pi.group.name().into(), right: omega.group().name().into() });
    }
    let d = pi.degree();
    let fixed = null_space(&(pi.integrate(omega) - CMatrix::identity(d, d)), opts.rank_tol).subspace;
    let chi = if omega.tv_norm() > 0.0 { extract_character(omega)?.ok() } else { None };
    let (predicted_dim, angle, matches) = match chi {
        Some(chi) => {
            let h = chi.domain();
            let mut stacked = CMatrix::zeros(d * h.order(), d);
            for (i, (s, value)) in chi.iter().enumerate() {
                let block = pi.matrix(s) - CMatrix::identity(d, d) * value.conj();
                stacked.view_mut((i * d, 0), (d, d)).copy_from(&block);
            }
            let predicted = null_space(&stacked, opts.rank_tol).subspace;
            let (eq, angle) = fixed.equals(&predicted, opts.angle_tol);
            (Some(predicted.dim()), Some(angle), eq || fixed.dim() == 0)
        }
        None => (None, None, fixed.dim() == 0),
    };
    Ok(RepresentationReport {
        representation: pi.name.clone(),
        degree: d,
        dim_fix: fixed.dim(),
        predicted_dim,
        angle,
        matches,
        fixed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{random_contractive, PhaseStyle, Profile};

    fn group(spec: &str) -> Arc<GroupTable> {
        Arc::new(GroupTable::parse(spec).unwrap())
    }

    #[test]
    fn regular_z2_swap() {
        let z2 = group("cyclic:2");
        let r = representation_fixed_points(
            &Representation::regular(&z2),
            &FiniteMeasure::delta(&z2, 1),
            &EngineOptions::default(),
        )
        .unwrap();
        assert_eq!(r.dim_fix, 1);
        assert!(r.matches);
        assert!(r.fixed.distance_to(&[c(1.0, 0.0), c(1.0, 0.0)]) < 1e-12);
    }

    #[test]
    fn trivial_representation_fixes_everything_under_states() {
        let s3 = group("symmetric:3");
        let w = random_contractive(&s3, 4, &Profile::new(PhaseStyle::CharacterTwisted(crate::group::CharacterMap::trivial(crate::group::Subgroup::whole(&s3))), 0.5));
        let r = representation_fixed_points(&Representation::trivial(&s3, 3), &w, &EngineOptions::default()).unwrap();
        assert_eq!(r.dim_fix, 3);
        assert!(r.matches);
    }

    #[test]
    fn regular_z4_twisted_rotation() {
        let z4 = group("cyclic:4");
        let w = FiniteMeasure::delta(&z4, 1).scale(c(0.0, 1.0));
        let r = representation_fixed_points(&Representation::regular(&z4), &w, &EngineOptions::default()).unwrap();
        assert_eq!(r.dim_fix, 1);
        assert!(r.matches);
        // λ(1) x = -i x, i.e. x(t-1) = -i x(t), so x(t) = i^t
        let x: Vec<Complex64> = (0..4).map(|t| c(0.0, 1.0).powu(t)).collect();
        assert!(r.fixed.distance_to(&x) < 1e-12);
    }

    #[test]
    fn standard_representations_validate() {
        for (spec, degree) in [("symmetric:3", 2), ("dihedral:4", 2), ("quaternion8", 2), ("symmetric:4", 3)] {
            let g = group(spec);
            assert_eq!(Representation::standard(&g).unwrap().degree(), degree, "{spec}");
        }
        assert!(Representation::standard(&group("cyclic:4")).is_err());
    }

    #[test]
    fn rejects_non_homomorphisms() {
        let z2 = group("cyclic:2");
        let m = vec![CMatrix::identity(1, 1), CMatrix::identity(1, 1) * c(0.0, 1.0)];
        assert!(matches!(Representation::new(&z2, "bad", m), Err(Error::NotHomomorphism(_))));
    }

    #[test]
    fn standard_irreps_match_prediction() {
        for spec in ["symmetric:3", "dihedral:4", "quaternion8"] {
            let g = group(spec);
            let pi = Representation::standard(&g).unwrap();
            for seed in 0..30 {
                let w = random_contractive(&g, seed, &Profile::new(PhaseStyle::RealSigned, 0.3));
                let r = representation_fixed_points(&pi, &w, &EngineOptions::default()).unwrap();
                assert!(r.matches, "{spec} seed {seed}: {r:?}");
            }
        }
    }

    #[test]
    fn quaternion_centre_acts_by_minus_one() {
        let q8 = group("quaternion8");
        let pi = Representation::standard(&q8).unwrap();
        // -1 is central with π(-1) = -I, so -δ_{-1} fixes every vector
        let w = FiniteMeasure::delta(&q8, 1).scale(c(-1.0, 0.0));
        let r = representation_fixed_points(&pi, &w, &EngineOptions::default()).unwrap();
        assert_eq!((r.dim_fix, r.predicted_dim), (2, Some(2)));
    }
}
