//! Complex measures on finite groups (dense) and on ℤ (sparse), with
//! convolution, total variation, polar decomposition and Cesàro averaging.

mod cesaro;
mod idempotent;
mod random;

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{semigroup_closure, subgroup_closure, CharacterMap, GroupTable, Subgroup};

pub use cesaro::{cesaro, cesaro_limit, CesaroOptions, CesaroTrace, CesaroVerdict};
pub use idempotent::{classify_idempotent, idempotency_residual, is_idempotent, Classification};
pub use random::{random_contractive, random_lattice, seeded_profile, PhaseStyle, Profile, ProfileKind};

/// Default cap on the number of atoms of a measure on ℤ.
pub const SUPPORT_CAP: usize = 20_000;

/// Relative modulus below which lattice coefficients are dropped.
const SPARSE_CLEANUP: f64 = 1e-15;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// A complex measure on a finite group, one coefficient per element.
#[derive(Clone, Debug)]
pub struct FiniteMeasure {
    group: Arc<GroupTable>,
    coeffs: Vec<Complex64>,
}

impl PartialEq for FiniteMeasure {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.group.table() == other.group.table()
    }
}

impl FiniteMeasure {
    pub fn new(group: Arc<GroupTable>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(Self { group, coeffs })
    }

    pub fn zero(group: &Arc<GroupTable>) -> Self {
        Self { group: group.clone(), coeffs: vec![zero(); group.order()] }
    }

    /// Point mass `δ_g`.
    pub fn delta(group: &Arc<GroupTable>, g: usize) -> Self {
        let mut m = Self::zero(group);
        m.coeffs[g] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn from_atoms(group: &Arc<GroupTable>, atoms: &[(usize, Complex64)]) -> Result<Self> {
        let mut m = Self::zero(group);
        for &(g, c) in atoms {
            group.check_element(g)?;
            m.coeffs[g] += c;
        }
        Ok(m)
    }

    /// Normalised Haar measure `m_H`.
    pub fn haar(subgroup: &Subgroup) -> Self {
        let mut m = Self::zero(subgroup.parent());
        let w = 1.0 / subgroup.order() as f64;
        for &h in subgroup.elements() {
            m.coeffs[h] = Complex64::new(w, 0.0);
        }
        m
    }

    /// `χ·m_H` for a character `χ` of `H`.
    pub fn character_haar(chi: &CharacterMap) -> Self {
        let h = chi.domain();
        let mut m = Self::zero(h.parent());
        let w = 1.0 / h.order() as f64;
        for (g, v) in chi.iter() {
            m.coeffs[g] = v * w;
        }
        m
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> Complex64 {
        self.coeffs[g]
    }

    fn check_carrier(&self, other: &FiniteMeasure) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group.table() == other.group.table() {
            Ok(())
        } else {
            Err(Error::CarrierMismatch {
                left: self.group.name().to_string(),
                right: other.group.name().to_string(),
            })
        }
    }

    /// `(μ⋆ν)(t) = Σ_s μ(s) ν(s⁻¹t)`.
    pub fn convolve(&self, other: &FiniteMeasure) -> Result<FiniteMeasure> {
        self.check_carrier(other)?;
        let g = &self.group;
        let mut out = vec![zero(); g.order()];
        for (s, &a) in self.coeffs.iter().enumerate() {
            if a == zero() {
                continue;
            }
            for (u, &b) in other.coeffs.iter().enumerate() {
                if b != zero() {
                    out[g.mul(s, u)] += a * b;
                }
            }
        }
        Ok(FiniteMeasure { group: g.clone(), coeffs: out })
    }

    /// `ω^{⋆k}` for `k ≥ 1`.
    pub fn power(&self, k: usize) -> FiniteMeasure {
        assert!(k >= 1, "convolution powers start at 1");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.convolve(self).expect("same carrier");
        }
        acc
    }

    pub fn tv_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Total mass `Σ ω(g)`.
    pub fn mass(&self) -> Complex64 {
        self.coeffs.iter().sum()
    }

    pub fn sub(&self, other: &FiniteMeasure) -> Result<FiniteMeasure> {
        self.check_carrier(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(FiniteMeasure { group: self.group.clone(), coeffs })
    }

    pub fn add(&self, other: &FiniteMeasure) -> Result<FiniteMeasure> {
        self.check_carrier(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(FiniteMeasure { group: self.group.clone(), coeffs })
    }

    pub fn scale(&self, factor: Complex64) -> FiniteMeasure {
        FiniteMeasure { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// `tv_norm(self − other)`.
    pub fn tv_distance(&self, other: &FiniteMeasure) -> Result<f64> {
        Ok(self.sub(other)?.tv_norm())
    }

    /// Elements with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.support_above(0.0)
    }

    /// Elements whose coefficient modulus exceeds `tol`.
    pub fn support_above(&self, tol: f64) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&g| self.coeffs[g].norm() > tol).collect()
    }

    /// Pointwise modulus `|ω|`.
    pub fn absolute_value(&self) -> FiniteMeasure {
        let coeffs = self.coeffs.iter().map(|c| Complex64::new(c.norm(), 0.0)).collect();
        FiniteMeasure { group: self.group.clone(), coeffs }
    }

    /// Unimodular phase `ω(g)/|ω(g)|` on the support.
    pub fn polar_phase(&self) -> BTreeMap<usize, Complex64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(g, c)| (g, c / c.norm()))
            .collect()
    }

    /// Multiplies pointwise by a function on the group.
    pub fn times_function(&self, f: &[Complex64]) -> FiniteMeasure {
        let coeffs = self.coeffs.iter().zip(f).map(|(c, v)| c * v).collect();
        FiniteMeasure { group: self.group.clone(), coeffs }
    }

    /// Non-negative coefficients summing to one, to `tol`.
    pub fn is_probability(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.re >= -tol && c.im.abs() <= tol) && (self.mass() - 1.0).norm() <= tol
    }

    /// Support of `|ω|`, the subgroup it generates, and the adaptedness flags.
    pub fn adaptedness(&self) -> Adaptedness {
        let support = self.support();
        let s_group = subgroup_closure(&self.group, &support).expect("support inside the group");
        let semigroup = if support.is_empty() {
            vec![self.group.identity()]
        } else {
            semigroup_closure(&self.group, &support).expect("nonempty support")
        };
        Adaptedness {
            adapted: s_group.is_whole(),
            nondegenerate: semigroup.len() == self.group.order(),
            support,
            s_group,
        }
    }

    pub fn to_json(&self) -> MeasureJson {
        MeasureJson {
            carrier: self.group.name().to_string(),
            atoms: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != zero())
                .map(|(g, c)| AtomJson { g: Some(g), n: None, re: c.re, im: c.im })
                .collect(),
        }
    }
}

/// Support bookkeeping for a measure on a finite group.
#[derive(Clone, Debug)]
pub struct Adaptedness {
    pub support: Vec<usize>,
    /// Subgroup generated by the support of `|ω|`.
    pub s_group: Subgroup,
    pub adapted: bool,
    pub nondegenerate: bool,
}

/// A finitely supported complex measure on ℤ.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LatticeMeasure {
    atoms: BTreeMap<i64, Complex64>,
}

impl LatticeMeasure {
    pub fn new(atoms: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut map = BTreeMap::new();
        for (n, c) in atoms {
            *map.entry(n).or_insert(zero()) += c;
        }
        map.retain(|_, c| *c != zero());
        Self { atoms: map }
    }

    pub fn delta(n: i64) -> Self {
        Self::new([(n, Complex64::new(1.0, 0.0))])
    }

    pub fn atoms(&self) -> &BTreeMap<i64, Complex64> {
        &self.atoms
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.atoms.get(&n).copied().unwrap_or(zero())
    }

    pub fn support(&self) -> Vec<i64> {
        self.atoms.keys().copied().collect()
    }

    pub fn tv_norm(&self) -> f64 {
        self.atoms.values().map(|c| c.norm()).sum()
    }

    /// `(μ⋆ν)(n) = Σ_m μ(m) ν(n − m)`; errors when the result exceeds `cap` atoms.
    pub fn convolve_capped(&self, other: &LatticeMeasure, cap: usize) -> Result<LatticeMeasure> {
        let mut out: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (&m, &a) in &self.atoms {
            for (&n, &b) in &other.atoms {
                *out.entry(m + n).or_insert(zero()) += a * b;
            }
        }
        let tv: f64 = out.values().map(|c| c.norm()).sum();
        let floor = SPARSE_CLEANUP * tv;
        out.retain(|_, c| c.norm() >= floor && *c != zero());
        if out.len() > cap {
            return Err(Error::SupportCap { size: out.len(), cap });
        }
        Ok(LatticeMeasure { atoms: out })
    }

    pub fn convolve(&self, other: &LatticeMeasure) -> Result<LatticeMeasure> {
        self.convolve_capped(other, SUPPORT_CAP)
    }

    pub fn scale(&self, factor: Complex64) -> LatticeMeasure {
        LatticeMeasure::new(self.atoms.iter().map(|(&n, &c)| (n, c * factor)))
    }

    pub fn add(&self, other: &LatticeMeasure) -> LatticeMeasure {
        LatticeMeasure::new(self.atoms.iter().chain(other.atoms.iter()).map(|(&n, &c)| (n, c)))
    }

    pub fn sub(&self, other: &LatticeMeasure) -> LatticeMeasure {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `Σ_{|n| ≤ window} |μ(n)|`.
    pub fn window_mass(&self, window: i64) -> f64 {
        self.atoms.range(-window..=window).map(|(_, c)| c.norm()).sum()
    }

    /// `max_{|n| ≤ window} |⟨μ, δ_n⟩|`.
    pub fn window_max(&self, window: i64) -> f64 {
        self.atoms.range(-window..=window).map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// `⟨μ, f⟩ = Σ_n μ(n) f(n)` for finitely supported `f`.
    pub fn pair(&self, f: &BTreeMap<i64, Complex64>) -> Complex64 {
        f.iter().map(|(n, v)| self.coeff(*n) * v).sum()
    }

    pub fn absolute_value(&self) -> LatticeMeasure {
        LatticeMeasure::new(self.atoms.iter().map(|(&n, c)| (n, Complex64::new(c.norm(), 0.0))))
    }

    pub fn is_probability(&self, tol: f64) -> bool {
        let mass: Complex64 = self.atoms.values().sum();
        self.atoms.values().all(|c| c.re >= -tol && c.im.abs() <= tol) && (mass - 1.0).norm() <= tol
    }

    pub fn to_json(&self) -> MeasureJson {
        MeasureJson {
            carrier: "Z".to_string(),
            atoms: self
                .atoms
                .iter()
                .map(|(&n, c)| AtomJson { g: None, n: Some(n), re: c.re, im: c.im })
                .collect(),
        }
    }
}

/// A measure on either kind of carrier.
#[derive(Clone, Debug, PartialEq)]
pub enum ComplexMeasure {
    Finite(FiniteMeasure),
    Lattice(LatticeMeasure),
}

impl ComplexMeasure {
    pub fn convolve(&self, other: &ComplexMeasure) -> Result<ComplexMeasure> {
        match (self, other) {
            (ComplexMeasure::Finite(a), ComplexMeasure::Finite(b)) => Ok(ComplexMeasure::Finite(a.convolve(b)?)),
            (ComplexMeasure::Lattice(a), ComplexMeasure::Lattice(b)) => Ok(ComplexMeasure::Lattice(a.convolve(b)?)),
            (a, b) => Err(Error::CarrierMismatch { left: a.carrier_name(), right: b.carrier_name() }),
        }
    }

    pub fn tv_norm(&self) -> f64 {
        match self {
            ComplexMeasure::Finite(m) => m.tv_norm(),
            ComplexMeasure::Lattice(m) => m.tv_norm(),
        }
    }

    pub fn absolute_value(&self) -> ComplexMeasure {
        match self {
            ComplexMeasure::Finite(m) => ComplexMeasure::Finite(m.absolute_value()),
            ComplexMeasure::Lattice(m) => ComplexMeasure::Lattice(m.absolute_value()),
        }
    }

    pub fn carrier_name(&self) -> String {
        match self {
            ComplexMeasure::Finite(m) => m.group().name().to_string(),
            ComplexMeasure::Lattice(_) => "Z".to_string(),
        }
    }

    pub fn as_finite(&self) -> Result<&FiniteMeasure> {
        match self {
            ComplexMeasure::Finite(m) => Ok(m),
            ComplexMeasure::Lattice(_) => Err(Error::FiniteCarrierRequired),
        }
    }

    pub fn to_json(&self) -> MeasureJson {
        match self {
            ComplexMeasure::Finite(m) => m.to_json(),
            ComplexMeasure::Lattice(m) => m.to_json(),
        }
    }

    /// Rebuilds a measure from its JSON form; finite carriers are rebuilt
    /// from their group spec.
    pub fn from_json(json: &MeasureJson) -> Result<ComplexMeasure> {
        if json.carrier == "Z" {
            let atoms = json
                .atoms
                .iter()
                .map(|a| {
                    a.n.map(|n| (n, Complex64::new(a.re, a.im)))
                        .ok_or_else(|| Error::Parse("lattice atom without `n`".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ComplexMeasure::Lattice(LatticeMeasure::new(atoms)))
        } else {
            let group = Arc::new(GroupTable::parse(&json.carrier)?);
            let atoms = json
                .atoms
                .iter()
                .map(|a| {
                    a.g.map(|g| (g, Complex64::new(a.re, a.im)))
                        .ok_or_else(|| Error::Parse("finite atom without `g`".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ComplexMeasure::Finite(FiniteMeasure::from_atoms(&group, &atoms)?))
        }
    }
}

impl From<FiniteMeasure> for ComplexMeasure {
    fn from(m: FiniteMeasure) -> Self {
        ComplexMeasure::Finite(m)
    }
}

impl From<LatticeMeasure> for ComplexMeasure {
    fn from(m: LatticeMeasure) -> Self {
        ComplexMeasure::Lattice(m)
    }
}

/// `{carrier, atoms: [{g | n, re, im}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub carrier: String,
    pub atoms: Vec<AtomJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    pub re: f64,
    pub im: f64,
}

/// Parses `key:value` pairs separated by commas, e.g. `0:0.5, 2:-0.5` or
/// `1:0.3+0.4i`.
pub fn parse_atoms<K: FromStr>(text: &str) -> Result<Vec<(K, Complex64)>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (k, v) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("atom `{item}` is not `key:value`")))?;
            let key = k.trim().parse::<K>().map_err(|_| Error::Parse(format!("bad key `{k}`")))?;
            let value = parse_complex(v.trim())?;
            Ok((key, value))
        })
        .collect()
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    Complex64::from_str(&compact).map_err(|_| Error::Parse(format!("bad complex number `{s}`")))
}

/// Parses a measure literal on a finite group.
pub fn parse_finite_literal(group: &Arc<GroupTable>, text: &str) -> Result<FiniteMeasure> {
    FiniteMeasure::from_atoms(group, &parse_atoms::<usize>(text)?)
}

/// Parses a measure literal on ℤ.
pub fn parse_lattice_literal(text: &str) -> Result<LatticeMeasure> {
    Ok(LatticeMeasure::new(parse_atoms::<i64>(text)?))
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
    fn point_masses_multiply() {
        let s3 = group("symmetric:3");
        for a in s3.elements() {
            for b in s3.elements() {
                let prod = FiniteMeasure::delta(&s3, a).convolve(&FiniteMeasure::delta(&s3, b)).unwrap();
                assert_eq!(prod, FiniteMeasure::delta(&s3, s3.mul(a, b)));
            }
        }
    }

    #[test]
    fn antisymmetric_half_on_z4_is_idempotent_by_expansion() {
        let z4 = group("cyclic:4");
        let w = parse_finite_literal(&z4, "0:0.5, 2:-0.5").unwrap();
        assert_eq!(w.convolve(&w).unwrap(), w);
        assert_eq!(w.tv_norm(), 1.0);
    }

    #[test]
    fn symmetric_walk_fourth_power_at_zero() {
        let w = parse_lattice_literal("-1:0.5, 1:0.5").unwrap();
        let mut p = w.clone();
        for _ in 1..4 {
            p = p.convolve(&w).unwrap();
        }
        // C(4,2)/2^4
        assert_eq!(p.coeff(0), c(0.375, 0.0));
        assert_eq!(p.support(), vec![-4, -2, 0, 2, 4]);
    }

    #[test]
    fn tv_norm_examples() {
        let z4 = group("cyclic:4");
        assert_eq!(FiniteMeasure::delta(&z4, 3).tv_norm(), 1.0);
        let h = subgroup_closure(&z4, &[2]).unwrap();
        assert_eq!(FiniteMeasure::haar(&h).tv_norm(), 1.0);
        assert_eq!(FiniteMeasure::zero(&z4).tv_norm(), 0.0);
    }

    #[test]
    fn absolute_value_and_phase() {
        let z4 = group("cyclic:4");
        let w = parse_finite_literal(&z4, "0:0.5, 2:-0.5").unwrap();
        assert_eq!(w.absolute_value(), parse_finite_literal(&z4, "0:0.5, 2:0.5").unwrap());
        assert_eq!(w.polar_phase(), BTreeMap::from([(0, c(1.0, 0.0)), (2, c(-1.0, 0.0))]));

        let iw = FiniteMeasure::from_atoms(&z4, &[(1, c(0.0, 1.0))]).unwrap();
        assert_eq!(iw.absolute_value(), FiniteMeasure::delta(&z4, 1));
        assert_eq!(iw.polar_phase(), BTreeMap::from([(1, c(0.0, 1.0))]));

        let w = FiniteMeasure::from_atoms(&z4, &[(0, c(3.0 / 7.0, 0.0)), (1, c(0.0, 4.0 / 7.0))]).unwrap();
        let phase = w.polar_phase();
        assert!((phase[&0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((phase[&1] - c(0.0, 1.0)).norm() < 1e-15);

        let p = parse_finite_literal(&z4, "0:0.25, 1:0.75").unwrap();
        assert_eq!(p.absolute_value(), p);
    }

    #[test]
    fn haar_examples() {
        let z4 = group("cyclic:4");
        let h = subgroup_closure(&z4, &[2]).unwrap();
        assert_eq!(FiniteMeasure::haar(&h), parse_finite_literal(&z4, "0:0.5, 2:0.5").unwrap());
        assert_eq!(FiniteMeasure::haar(&Subgroup::trivial(&z4)), FiniteMeasure::delta(&z4, 0));
        let s3 = group("symmetric:3");
        let m = FiniteMeasure::haar(&Subgroup::whole(&s3));
        assert!(m.coeffs().iter().all(|&v| v == c(1.0 / 6.0, 0.0)));
        assert!(is_idempotent(&m, 1e-15));
    }

    #[test]
    fn adaptedness_examples() {
        let z4 = group("cyclic:4");
        let a = FiniteMeasure::delta(&z4, 1).adaptedness();
        assert!(a.adapted && a.nondegenerate);
        let a = FiniteMeasure::delta(&z4, 2).adaptedness();
        assert!(!a.adapted);
        assert_eq!(a.s_group.elements(), &[0, 2]);
        assert!(FiniteMeasure::haar(&Subgroup::whole(&z4)).adaptedness().adapted);
    }

    #[test]
    fn carrier_mismatch_is_an_error() {
        let a = FiniteMeasure::delta(&group("cyclic:4"), 1);
        let b = FiniteMeasure::delta(&group("cyclic:6"), 1);
        assert!(matches!(a.convolve(&b), Err(Error::CarrierMismatch { .. })));
        let z = ComplexMeasure::Lattice(LatticeMeasure::delta(0));
        assert!(ComplexMeasure::Finite(a).convolve(&z).is_err());
    }

    #[test]
    fn lattice_support_cap() {
        let w = LatticeMeasure::new((0..200).map(|n| (n, c(1.0 / 200.0, 0.0))));
        let err = w.convolve_capped(&w, 100).unwrap_err();
        assert_eq!(err, Error::SupportCap { size: 399, cap: 100 });
    }

    #[test]
    fn json_round_trip() {
        let z4 = group("cyclic:4");
        let w: ComplexMeasure = parse_finite_literal(&z4, "1:0.5, 3:-0.5i").unwrap().into();
        let text = serde_json::to_string(&w.to_json()).unwrap();
        assert_eq!(text, r#"{"carrier":"cyclic:4","atoms":[{"g":1,"re":0.5,"im":0.0},{"g":3,"re":0.0,"im":-0.5}]}"#);
        let back = ComplexMeasure::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, w);
        let z: ComplexMeasure = parse_lattice_literal("-1:0.5, 1:0.5").unwrap().into();
        let back = ComplexMeasure::from_json(&z.to_json()).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn literal_parse_errors() {
        let z4 = group("cyclic:4");
        assert!(parse_finite_literal(&z4, "0 0.5").is_err());
        assert!(parse_finite_literal(&z4, "7:1").is_err());
        assert!(parse_finite_literal(&z4, "1:abc").is_err());
    }
}
