use num_complex::Complex64;
use serde::Serialize;

use super::{DualCarrier, DualFunction};
use crate::error::{Error, Result};

/// A finitely supported test function: `(point, weight)` pairs, where the
/// point is an element index on finite carriers and an integer on ℤ.
pub type TestFunction = Vec<(i64, Complex64)>;

/// Pairings of one test function with `S_n(ω)` and with `ω^{⋆n}`.
#[derive(Clone, Debug, Serialize)]
pub struct PairingCase {
    pub test: TestFunction,
    /// `|⟨S_n(ω), f⟩|`.
    pub cesaro: f64,
    /// `|⟨ω^{⋆n}, f⟩|`.
    pub power: f64,
    /// `Σ_{m ∈ Z_ω} f(m)`, the value `⟨S_n(ω), f⟩` tends to.
    pub expected_limit: Complex64,
    /// `|⟨S_n(ω), f⟩ − expected_limit|`.
    pub limit_residual: f64,
    /// `Σ_{m ∉ Z_ω} |f(m)|·2/(n|1 − ω(m)|)`.
    pub geometric_bound: f64,
    /// Distance between the iterated sum and the closed form
    /// `z(1 − zⁿ)/(n(1 − z))` summed against `f`.
    pub closed_form_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualMukherjeaReport {
    pub n: usize,
    pub norm: Option<f64>,
    /// `Z_ω` restricted to the union of the test supports.
    pub z_points: Vec<i64>,
    pub cases: Vec<PairingCase>,
    /// All Cesàro pairings are at most `eps`.
    pub cesaro_decays: bool,
    /// Every pairing is within `eps` of its predicted limit and below the
    /// geometric bound.
    pub consistent: bool,
}

fn value_at(d: &DualFunction, m: i64) -> Result<Complex64> {
    match d.carrier() {
        DualCarrier::Lattice { toral, .. } => Ok(toral.eval(m)),
        DualCarrier::Finite(g) => {
            let idx = usize::try_from(m).map_err(|_| Error::ElementOutOfRange { element: 0, order: g.order() })?;
            g.check_element(idx)?;
            Ok(d.values()[idx])
        }
    }
}

/// Evaluates `⟨S_n(ω), f⟩ = Σ_m f(m)·(1/n)Σ_{k=1}^n ω(m)^k` and
/// `⟨ω^{⋆n}, f⟩ = Σ_m f(m) ω(m)^n` for each test function, and compares
/// them with the limit predicted by `Z_ω` (`ω(m)^k → ` Cesàro mean 1 on
/// `Z_ω`, 0 elsewhere).
pub fn mukherjea_dual(
    d: &DualFunction,
    tests: &[TestFunction],
    n_max: usize,
    z_tol: f64,
    eps: f64,
) -> Result<DualMukherjeaReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    if let Some(norm) = d.norm() {
        if norm > 1.0 + z_tol {
            return Err(Error::Precondition(format!("‖ω‖ = {norm} exceeds 1")));
        }
    }
    let n = n_max as f64;
    let mut z_points = Vec::new();
    let mut cases = Vec::with_capacity(tests.len());
    for f in tests {
        let mut cesaro = Complex64::new(0.0, 0.0);
        let mut closed = Complex64::new(0.0, 0.0);
        let mut power = Complex64::new(0.0, 0.0);
        let mut expected_limit = Complex64::new(0.0, 0.0);
        let mut geometric_bound = 0.0;
        for &(m, weight) in f {
            let z = value_at(d, m)?;
            let mut zk = Complex64::new(1.0, 0.0);
            let mut sum = Complex64::new(0.0, 0.0);
            for _ in 0..n_max {
                zk *= z;
                sum += zk;
            }
            cesaro += weight * sum / n;
            power += weight * zk;
            if (z - 1.0).norm() <= z_tol {
                expected_limit += weight;
                closed += weight * sum / n;
                z_points.push(m);
            } else {
                closed += weight * z * (Complex64::new(1.0, 0.0) - z.powu(n_max as u32)) / (n * (1.0 - z));
                geometric_bound += weight.norm() * 2.0 / (n * (1.0 - z).norm());
            }
        }
        cases.push(PairingCase {
            test: f.clone(),
            cesaro: cesaro.norm(),
            power: power.norm(),
            expected_limit,
            limit_residual: (cesaro - expected_limit).norm(),
            geometric_bound,
            closed_form_error: (cesaro - closed).norm(),
        });
    }
    z_points.sort_unstable();
    z_points.dedup();
    let cesaro_decays = cases.iter().all(|c| c.cesaro <= eps);
    let consistent = cases.iter().all(|c| {
        c.limit_residual <= eps && c.limit_residual <= c.geometric_bound + 1e-10 && c.closed_form_error <= 1e-10
    });
    Ok(DualMukherjeaReport { n: n_max, norm: d.norm(), z_points, cases, cesaro_decays, consistent })
}

#[cfg(test)]
mod tests {
    use super::super::AtomicToralMeasure;
    use super::*;
    use crate::group::{GroupTable, LatticeGroup};
    use std::sync::Arc;

    fn golden_angle() -> f64 {
        // 2π times the fractional part of the golden ratio
        std::f64::consts::TAU * ((1.0 + 5f64.sqrt()) / 2.0).fract()
    }

    fn one(m: i64) -> TestFunction {
        vec![(m, Complex64::new(1.0, 0.0))]
    }

    #[test]
    fn irrational_rotation_on_integers() {
        let toral = AtomicToralMeasure::new([(Complex64::new(1.0, 0.0), golden_angle())]).unwrap();
        let d = DualFunction::lattice(toral, LatticeGroup::new(8).unwrap());
        let r = mukherjea_dual(&d, &[one(1), one(0), one(-2)], 4096, 1e-9, 1e-2).unwrap();
        assert_eq!(r.z_points, vec![0]);
        assert!(r.cases[0].cesaro <= 1e-2);
        assert!((r.cases[1].cesaro - 1.0).abs() < 1e-12);
        assert!(!r.cesaro_decays && r.consistent);
    }

    #[test]
    fn unimodular_shift_vanishes_everywhere() {
        let c = Complex64::from_polar(1.0, 2.0);
        let toral = AtomicToralMeasure::new([(c, 0.9)]).unwrap();
        let d = DualFunction::lattice(toral, LatticeGroup::new(8).unwrap());
        let tests: Vec<TestFunction> = (-3..=3).map(one).collect();
        let r = mukherjea_dual(&d, &tests, 4096, 1e-9, 1e-2).unwrap();
        assert!(r.z_points.is_empty() && r.cesaro_decays && r.consistent);
        for case in &r.cases {
            assert!(case.cesaro <= case.geometric_bound + 1e-10);
        }
    }

    #[test]
    fn finite_character_keeps_kernel_pairings() {
        let z6 = Arc::new(GroupTable::parse("cyclic:6").unwrap());
        let d = DualFunction::cyclic_character(&z6, 2).unwrap();
        let r = mukherjea_dual(&d, &[one(3), one(1)], 600, 1e-9, 1e-2).unwrap();
        assert!((r.cases[0].cesaro - 1.0).abs() < 1e-12 && (r.cases[0].power - 1.0).abs() < 1e-12);
        assert!(r.cases[1].cesaro < 1e-2 && r.consistent);
    }

    #[test]
    fn rejects_large_norm_and_bad_points() {
        let toral = AtomicToralMeasure::new([(Complex64::new(2.0, 0.0), 0.5)]).unwrap();
        let d = DualFunction::lattice(toral, LatticeGroup::new(8).unwrap());
        assert!(mukherjea_dual(&d, &[one(0)], 16, 1e-9, 1e-2).is_err());
        let z6 = Arc::new(GroupTable::parse("cyclic:6").unwrap());
        let d = DualFunction::cyclic_character(&z6, 1).unwrap();
        assert!(mukherjea_dual(&d, &[one(6)], 16, 1e-9, 1e-2).is_err());
    }
}
