use num_complex::Complex64;
use serde::Serialize;

use super::{idempotency_residual, ComplexMeasure, FiniteMeasure, LatticeMeasure, SUPPORT_CAP};
use crate::error::{Error, Result};
use crate::group::LatticeGroup;

/// Cesàro average `S_n(ω) = (1/n) Σ_{k=1}^n ω^{⋆k}`, by incremental powering.
pub fn cesaro(omega: &ComplexMeasure, n: usize) -> Result<ComplexMeasure> {
    cesaro_capped(omega, n, SUPPORT_CAP)
}

pub fn cesaro_capped(omega: &ComplexMeasure, n: usize, cap: usize) -> Result<ComplexMeasure> {
    if n == 0 {
        return Err(Error::InvalidArgument("Cesàro index starts at 1".into()));
    }
    let scale = Complex64::new(1.0 / n as f64, 0.0);
    match omega {
        ComplexMeasure::Finite(w) => {
            let mut power = w.clone();
            let mut sum = w.clone();
            for _ in 1..n {
                power = power.convolve(w)?;
                sum = sum.add(&power)?;
            }
            Ok(ComplexMeasure::Finite(sum.scale(scale)))
        }
        ComplexMeasure::Lattice(w) => {
            let mut power = w.clone();
            let mut sum = w.clone();
            for _ in 1..n {
                power = power.convolve_capped(w, cap)?;
                sum = sum.add(&power);
            }
            Ok(ComplexMeasure::Lattice(sum.scale(scale)))
        }
    }
}

/// Knobs for [`cesaro_limit`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct CesaroOptions {
    pub eps: f64,
    pub n_max: usize,
    pub window: i64,
    pub support_cap: usize,
}

impl Default for CesaroOptions {
    fn default() -> Self {
        Self { eps: 1e-9, n_max: 4096, window: LatticeGroup::DEFAULT_WINDOW, support_cap: SUPPORT_CAP }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CesaroVerdict {
    ConvergedTo(ComplexMeasure),
    ConvergedToZero,
    Undecided,
}

impl CesaroVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            CesaroVerdict::ConvergedTo(_) => "converged",
            CesaroVerdict::ConvergedToZero => "zero",
            CesaroVerdict::Undecided => "undecided",
        }
    }

    pub fn limit(&self) -> Option<&ComplexMeasure> {
        match self {
            CesaroVerdict::ConvergedTo(m) => Some(m),
            _ => None,
        }
    }
}

/// Record of a Cesàro run: snapshots at the checkpoints, the residual
/// history and the verdict.
#[derive(Clone, Debug)]
pub struct CesaroTrace {
    pub measure: ComplexMeasure,
    pub terms: Vec<(usize, ComplexMeasure)>,
    pub residuals: Vec<(usize, f64)>,
    pub verdict: CesaroVerdict,
}

/// Runs Cesàro averages at doubling checkpoints and decides the limit.
///
/// Finite carriers use checkpoints `n = |G|·2^j`. Every unimodular
/// eigenvalue of a random walk on `G` other than 1 is a root of unity of
/// order dividing `|G|`, so its contribution to `S_n` cancels exactly at
/// these `n`; what remains is `ω̃ + (A − B_n)/n` with `B_n → 0`
/// geometrically. The extrapolant `E_n = 2·S_{2n} − S_n` removes the `A/n`
/// term, and the residual is the total variation between consecutive
/// extrapolants.
///
/// On ℤ the checkpoints are powers of two, the residual is the windowed
/// sup-difference of consecutive `S_n`, and vanishing is judged by the
/// mass of `S_n` inside the window.
pub fn cesaro_limit(omega: &ComplexMeasure, opts: &CesaroOptions) -> Result<CesaroTrace> {
    let tv = omega.tv_norm();
    if tv > 1.0 + opts.eps {
        return Err(Error::Precondition(format!("measure is not contractive: ‖ω‖ = {tv}")));
    }
    match omega {
        ComplexMeasure::Finite(w) => Ok(finite_limit(w, opts)),
        ComplexMeasure::Lattice(w) => lattice_limit(w, opts),
    }
}

fn finite_limit(w: &FiniteMeasure, opts: &CesaroOptions) -> CesaroTrace {
    let base = w.group().order();
    let mut terms: Vec<(usize, ComplexMeasure)> = Vec::new();
    let mut residuals = Vec::new();
    let mut verdict = CesaroVerdict::Undecided;

    let mut power = w.clone();
    let mut sum = w.clone();
    let mut n = 1;
    let mut checkpoint = base;
    let mut averages: Vec<FiniteMeasure> = Vec::new();
    let mut extrapolants: Vec<FiniteMeasure> = Vec::new();
    while checkpoint <= opts.n_max {
        while n < checkpoint {
            power = power.convolve(w).expect("same carrier");
            sum = sum.add(&power).expect("same carrier");
            n += 1;
        }
        let average = sum.scale(Complex64::new(1.0 / n as f64, 0.0));
        terms.push((n, ComplexMeasure::Finite(average.clone())));
        if let Some(prev) = averages.last() {
            let e = average.scale(Complex64::new(2.0, 0.0)).sub(prev).expect("same carrier");
            if let Some(prev_e) = extrapolants.last() {
                let r = e.tv_distance(prev_e).expect("same carrier");
                residuals.push((n, r));
                if r <= opts.eps {
                    if let Some(v) = judge_finite(&e, opts.eps) {
                        verdict = v;
                        break;
                    }
                }
            }
            extrapolants.push(e);
        }
        averages.push(average);
        checkpoint *= 2;
    }
    CesaroTrace { measure: ComplexMeasure::Finite(w.clone()), terms, residuals, verdict }
}

fn judge_finite(candidate: &FiniteMeasure, eps: f64) -> Option<CesaroVerdict> {
    let tv = candidate.tv_norm();
    if tv <= eps {
        return Some(CesaroVerdict::ConvergedToZero);
    }
    // drop numerical dust below the tolerance
    let cleaned: Vec<Complex64> = candidate
        .coeffs()
        .iter()
        .map(|c| if c.norm() <= eps * 1e-3 { Complex64::new(0.0, 0.0) } else { *c })
        .collect();
    let cleaned = FiniteMeasure::new(candidate.group().clone(), cleaned).expect("same length");
    let measure = ComplexMeasure::Finite(cleaned);
    if idempotency_residual(&measure).ok()? <= 10.0 * eps {
        Some(CesaroVerdict::ConvergedTo(measure))
    } else {
        None
    }
}

fn lattice_limit(w: &LatticeMeasure, opts: &CesaroOptions) -> Result<CesaroTrace> {
    let window = opts.window;
    let mut terms: Vec<(usize, ComplexMeasure)> = Vec::new();
    let mut residuals = Vec::new();
    let mut verdict = CesaroVerdict::Undecided;

    let mut power = w.clone();
    let mut sum = w.clone();
    let mut n = 1;
    let mut checkpoint = 1;
    let mut prev: Option<LatticeMeasure> = None;
    while checkpoint <= opts.n_max {
        while n < checkpoint {
            power = power.convolve_capped(w, opts.support_cap)?;
            sum = sum.add(&power);
            n += 1;
        }
        let average = sum.scale(Complex64::new(1.0 / n as f64, 0.0));
        terms.push((n, ComplexMeasure::Lattice(average.clone())));
        if average.window_mass(window) <= opts.eps {
            verdict = CesaroVerdict::ConvergedToZero;
            break;
        }
        if let Some(p) = &prev {
            let r = average.sub(p).window_max(window);
            residuals.push((n, r));
            if r <= opts.eps {
                let candidate = ComplexMeasure::Lattice(average.clone());
                if idempotency_residual(&candidate)? <= 10.0 * opts.eps {
                    verdict = CesaroVerdict::ConvergedTo(candidate);
                    break;
                }
            }
        }
        prev = Some(average);
        checkpoint *= 2;
    }
    Ok(CesaroTrace { measure: ComplexMeasure::Lattice(w.clone()), terms, residuals, verdict })
}
