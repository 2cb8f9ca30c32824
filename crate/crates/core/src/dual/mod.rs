//! Elements of the Fourier–Stieltjes algebra `B(G)` acting on `VN(G)` by
//! pointwise multiplication: certified norms, level sets `Z_ω`, fixed
//! spaces, the dual Cesàro behaviour, and the abelian Fourier picture.

mod abelian;
mod mukherjea;
mod random;
mod toral;
mod zset;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{dual_group, root_of_unity, GroupSpec, GroupTable, LatticeGroup};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::measure::{AtomJson, FiniteMeasure};

pub use abelian::{abelian_prop_check, fourier_transform, inverse_fourier, AbelianPropReport};
pub use mukherjea::{mukherjea_dual, DualMukherjeaReport, PairingCase, TestFunction};
pub use random::random_dual;
pub use toral::{AtomicToralMeasure, ToralAtomJson};
pub use zset::{multiplicative_domain_residual, vn_fixed_space, z_set, VnFixedReport, ZSetReport, Z_TOL};

/// Smallest Gram eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;

/// Where a dual function lives.
#[derive(Clone, Debug)]
pub enum DualCarrier {
    Finite(Arc<GroupTable>),
    /// Values on `[-window, window]`; the function itself is the transform
    /// of an atomic measure on the circle.
    Lattice { lattice: LatticeGroup, toral: AtomicToralMeasure },
}

/// How the `B(G)`-norm of a dual function is known.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The Gram matrix `[ω(s⁻¹t)]` is positive semidefinite; norm `ω(e)`.
    PositiveDefinite { norm: f64 },
    /// `conj(phase)·ω` is positive definite; norm `|ω(e)|`.
    ScaledPositiveDefinite { phase: Complex64, norm: f64 },
    /// Abelian carrier: `ω = Σ_χ a_χ χ` with `a` the stored measure on the
    /// dual group; norm `Σ |a_χ|`.
    AbelianTv {
        #[serde(skip)]
        measure: FiniteMeasure,
        norm: f64,
    },
    /// Transform of an atomic measure on the circle; norm `Σ |c_j|`.
    AtomicToral { norm: f64 },
    Unverified,
}

impl Certificate {
    pub fn norm(&self) -> Option<f64> {
        match self {
            Certificate::PositiveDefinite { norm }
            | Certificate::ScaledPositiveDefinite { norm, .. }
            | Certificate::AbelianTv { norm, .. }
            | Certificate::AtomicToral { norm } => Some(*norm),
            Certificate::Unverified => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::PositiveDefinite { .. } => "positive_definite",
            Certificate::ScaledPositiveDefinite { .. } => "scaled_positive_definite",
            Certificate::AbelianTv { .. } => "abelian_tv",
            Certificate::AtomicToral { .. } => "atomic_toral",
            Certificate::Unverified => "unverified",
        }
    }
}

/// A function on `G` viewed as an element of `B(G)`.
#[derive(Clone, Debug)]
pub struct DualFunction {
    carrier: DualCarrier,
    values: Vec<Complex64>,
    certificate: Certificate,
}

/// Smallest eigenvalue of the Hermitian part of `[ω(s⁻¹t)]`, or `None` when
/// the matrix is not Hermitian.
fn gram_min_eigenvalue(group: &GroupTable, values: &[Complex64]) -> Option<f64> {
    let n = group.order();
    let gram = CMatrix::from_fn(n, n, |s, t| values[group.mul(group.inv(s), t)]);
    let skew = (&gram - gram.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    if skew > 1e-12 * scale {
        return None;
    }
    let hermitian = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    Some(hermitian_eigenvalues(&hermitian).into_iter().fold(f64::INFINITY, f64::min))
}

fn is_psd(group: &GroupTable, values: &[Complex64]) -> bool {
    gram_min_eigenvalue(group, values).is_some_and(|m| m >= -PSD_TOL)
}

fn certify(group: &Arc<GroupTable>, values: &[Complex64]) -> Result<Certificate> {
    let at_e = values[group.identity()];
    if is_psd(group, values) {
        return Ok(Certificate::PositiveDefinite { norm: at_e.re });
    }
    if group.is_abelian() {
        let measure = inverse_fourier(group, values)?;
        let norm = measure.tv_norm();
        return Ok(Certificate::AbelianTv { measure, norm });
    }
    if at_e.norm() > 0.0 {
        let phase = at_e / at_e.norm();
        let rotated: Vec<Complex64> = values.iter().map(|v| v * phase.conj()).collect();
        if is_psd(group, &rotated) {
            return Ok(Certificate::ScaledPositiveDefinite { phase, norm: at_e.norm() });
        }
    }
    Ok(Certificate::Unverified)
}

/// Wraps the values of a function on a finite group and certifies its
/// `B(G)`-norm where possible.
pub fn make_dual(group: &Arc<GroupTable>, values: Vec<Complex64>) -> Result<DualFunction> {
    if values.len() != group.order() {
        return Err(Error::InvalidArgument(format!(
            "{} values for a group of order {}",
            values.len(),
            group.order()
        )));
    }
    let certificate = certify(group, &values)?;
    Ok(DualFunction { carrier: DualCarrier::Finite(group.clone()), values, certificate })
}

impl DualFunction {
    /// The transform `n ↦ Σ c_j e^{inθ_j}` sampled on the window.
    pub fn lattice(toral: AtomicToralMeasure, lattice: LatticeGroup) -> Self {
        let w = lattice.window();
        let values = (-w..=w).map(|n| toral.eval(n)).collect();
        let certificate = Certificate::AtomicToral { norm: toral.norm() };
        Self { carrier: DualCarrier::Lattice { lattice, toral }, values, certificate }
    }

    /// `χ_k(m) = e^{2πikm/n}` on `cyclic:n`.
    pub fn cyclic_character(group: &Arc<GroupTable>, k: u64) -> Result<Self> {
        let n = match group.name().parse::<GroupSpec>()? {
            GroupSpec::Cyclic(n) => n as u64,
            other => return Err(Error::InvalidArgument(format!("char:k needs a cyclic carrier, got {other}"))),
        };
        make_dual(group, (0..n).map(|m| root_of_unity((k % n) * m % n, n)).collect())
    }

    pub fn carrier(&self) -> &DualCarrier {
        &self.carrier
    }

    pub fn carrier_name(&self) -> String {
        match &self.carrier {
            DualCarrier::Finite(g) => g.name().to_string(),
            DualCarrier::Lattice { lattice, .. } => format!("integers[{}]", lattice.window()),
        }
    }

    pub fn group(&self) -> Result<&Arc<GroupTable>> {
        match &self.carrier {
            DualCarrier::Finite(g) => Ok(g),
            DualCarrier::Lattice { .. } => Err(Error::FiniteCarrierRequired),
        }
    }

    /// Values in element order (finite) or for `n = -window..=window`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `ω(n)` on ℤ, evaluated from the toral measure at any `n`.
    pub fn lattice_value(&self, n: i64) -> Result<Complex64> {
        match &self.carrier {
            DualCarrier::Lattice { toral, .. } => Ok(toral.eval(n)),
            DualCarrier::Finite(_) => Err(Error::InvalidArgument("lattice_value on a finite carrier".into())),
        }
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn norm(&self) -> Option<f64> {
        self.certificate.norm()
    }

    /// `ω^k` pointwise, which is the `k`-fold convolution power in `B(G)`.
    /// The certificate is recomputed rather than propagated.
    pub fn pointwise_power(&self, k: u32) -> Result<DualFunction> {
        if k == 0 {
            return Err(Error::InvalidArgument("power must be at least 1".into()));
        }
        match &self.carrier {
            DualCarrier::Finite(g) => make_dual(g, self.values.iter().map(|v| v.powu(k)).collect()),
            DualCarrier::Lattice { lattice, toral } => Ok(DualFunction::lattice(toral.power(k), *lattice)),
        }
    }

    pub fn to_json(&self) -> DualJson {
        let values = match &self.carrier {
            DualCarrier::Finite(_) => self
                .values
                .iter()
                .enumerate()
                .map(|(g, v)| AtomJson { g: Some(g), n: None, re: v.re, im: v.im })
                .collect(),
            DualCarrier::Lattice { lattice, .. } => (-lattice.window()..=lattice.window())
                .zip(&self.values)
                .map(|(n, v)| AtomJson { g: None, n: Some(n), re: v.re, im: v.im })
                .collect(),
        };
        let toral = match &self.carrier {
            DualCarrier::Lattice { toral, .. } => Some(toral.to_json()),
            DualCarrier::Finite(_) => None,
        };
        DualJson {
            carrier: self.carrier_name(),
            values,
            certificate: CertificateJson { kind: self.certificate.kind().into(), norm: self.norm() },
            atoms: toral,
        }
    }

    /// Rebuilds from JSON; finite carriers take `values`, ℤ carriers take
    /// `atoms` and a window read from `integers[w]`.
    pub fn from_json(json: &DualJson) -> Result<DualFunction> {
        if let Some(rest) = json.carrier.strip_prefix("integers[") {
            let window: i64 = rest
                .strip_suffix(']')
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad lattice carrier `{}`", json.carrier)))?;
            let atoms = json.atoms.as_ref().ok_or_else(|| Error::Parse("lattice dual needs `atoms`".into()))?;
            let toral = AtomicToralMeasure::new(atoms.iter().map(|a| (Complex64::new(a.re, a.im), a.theta)))?;
            return Ok(DualFunction::lattice(toral, LatticeGroup::new(window)?));
        }
        let group = Arc::new(GroupTable::parse(&json.carrier)?);
        let mut values = vec![Complex64::new(0.0, 0.0); group.order()];
        for atom in &json.values {
            let g = atom.g.ok_or_else(|| Error::Parse("finite dual value needs `g`".into()))?;
            group.check_element(g)?;
            values[g] = Complex64::new(atom.re, atom.im);
        }
        make_dual(&group, values)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub kind: String,
    pub norm: Option<f64>,
}

/// `{carrier, values: [{g | n, re, im}], certificate: {kind, norm}, atoms?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualJson {
    pub carrier: String,
    pub values: Vec<AtomJson>,
    pub certificate: CertificateJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<ToralAtomJson>>,
}

/// Whether `dual_group` applies; used to route the abelian checks.
pub fn has_dual_group(group: &Arc<GroupTable>) -> bool {
    dual_group(group).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(spec: &str) -> Arc<GroupTable> {
        Arc::new(GroupTable::parse(spec).unwrap())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_one_is_positive_definite() {
        let d = make_dual(&group("cyclic:4"), vec![c(1.0, 0.0); 4]).unwrap();
        assert_eq!(d.certificate(), &Certificate::PositiveDefinite { norm: 1.0 });
    }

    #[test]
    fn characters_are_positive_definite() {
        let z6 = group("cyclic:6");
        let d = DualFunction::cyclic_character(&z6, 2).unwrap();
        assert_eq!(d.values()[1], root_of_unity(1, 3));
        assert_eq!(d.norm(), Some(1.0));
        assert!(matches!(d.certificate(), Certificate::PositiveDefinite { .. }));
    }

    #[test]
    fn subgroup_indicator_is_positive_definite() {
        let z6 = group("cyclic:6");
        let values = (0..6).map(|m| if m % 2 == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect();
        let d = make_dual(&z6, values).unwrap();
        assert_eq!(d.certificate(), &Certificate::PositiveDefinite { norm: 1.0 });
    }

    #[test]
    fn non_psd_abelian_gets_fourier_norm() {
        let z4 = group("cyclic:4");
        // 1 - χ_1 has transform δ_{χ0} - δ_{χ1} of norm 2
        let chi = DualFunction::cyclic_character(&z4, 1).unwrap();
        let values = chi.values().iter().map(|v| c(1.0, 0.0) - v).collect();
        let d = make_dual(&z4, values).unwrap();
        assert_eq!(d.certificate().kind(), "abelian_tv");
        assert!((d.norm().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rotated_positive_definite_on_s3() {
        let s3 = group("symmetric:3");
        let d = make_dual(&s3, vec![c(0.0, 1.0); 6]).unwrap();
        match d.certificate() {
            Certificate::ScaledPositiveDefinite { phase, norm } => {
                assert_eq!(*phase, c(0.0, 1.0));
                assert_eq!(*norm, 1.0);
            }
            other => panic!("{other:?}"),
        }
        let bad = make_dual(&s3, (0..6).map(|g| c(g as f64, 0.0)).collect()).unwrap();
        assert_eq!(bad.certificate(), &Certificate::Unverified);
    }

    #[test]
    fn powers() {
        let z6 = group("cyclic:6");
        let chi = DualFunction::cyclic_character(&z6, 1).unwrap();
        let sq = chi.pointwise_power(2).unwrap();
        let expected = DualFunction::cyclic_character(&z6, 2).unwrap();
        for (a, b) in sq.values().iter().zip(expected.values()) {
            assert!((a - b).norm() < 1e-15);
        }
        let one = make_dual(&z6, vec![c(1.0, 0.0); 6]).unwrap();
        assert_eq!(one.pointwise_power(5).unwrap().values(), one.values());
        assert!(chi.pointwise_power(0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = DualFunction::cyclic_character(&group("cyclic:6"), 2).unwrap();
        let back = DualFunction::from_json(&d.to_json()).unwrap();
        assert_eq!(back.values(), d.values());
        let toral = AtomicToralMeasure::new([(c(0.5, 0.0), 0.3), (c(0.0, 0.5), 1.1)]).unwrap();
        let l = DualFunction::lattice(toral, LatticeGroup::new(4).unwrap());
        let text = serde_json::to_string(&l.to_json()).unwrap();
        let back = DualFunction::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.values(), l.values());
        assert_eq!(back.norm(), Some(1.0));
    }
}
