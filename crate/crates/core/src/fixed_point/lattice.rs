use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{LatticeMeasure, SUPPORT_CAP};

const PROBABILITY_TOL: f64 = 1e-12;

/// Windowed decay of `S_n(ω)` on ℤ, the computable shadow of "no nonzero
/// `ℓ_p` fixed points" for an adapted probability.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeDecayReport {
    pub n: usize,
    pub window: i64,
    /// `max_{|m| ≤ window} |⟨S_n, δ_m⟩|`.
    pub max_pairing: f64,
    pub passes: bool,
}

/// Compactness against windowed decay for a probability on ℤ.
#[derive(Clone, Debug, Serialize)]
pub struct MukherjeaReport {
    pub n_max: usize,
    pub window: i64,
    /// `G_ω` is compact, which on ℤ means `supp ω ⊆ {0}`.
    pub compact: bool,
    pub cesaro_window_max: f64,
    /// Largest windowed coefficient of `ω^{⋆n_max}` and `ω^{⋆(n_max−1)}`;
    /// two consecutive powers are used so periodic walks cannot hide.
    pub power_window_max: f64,
    pub cesaro_decays: bool,
    pub powers_decay: bool,
    pub consistent: bool,
}

fn require_probability(omega: &LatticeMeasure) -> Result<()> {
    if !omega.is_probability(PROBABILITY_TOL) {
        return Err(Error::Precondition("expected a probability measure on ℤ".into()));
    }
    Ok(())
}

struct Run {
    cesaro: LatticeMeasure,
    last: LatticeMeasure,
    before_last: LatticeMeasure,
}

fn run_powers(omega: &LatticeMeasure, n: usize, cap: usize) -> Result<Run> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut before_last = LatticeMeasure::delta(0);
    let mut power = omega.clone();
    let mut sum = omega.clone();
    for _ in 1..n {
        let next = power.convolve_capped(omega, cap)?;
        before_last = std::mem::replace(&mut power, next);
        sum = sum.add(&power);
    }
    Ok(Run { cesaro: sum.scale(Complex64::new(1.0 / n as f64, 0.0)), last: power, before_last })
}

/// Decay of `S_n(ω)` over `[-window, window]`; `passes` iff the largest
/// pairing with a point mass in the window is at most `tol`.
pub fn lp_lattice_decay(omega: &LatticeMeasure, window: i64, n: usize, tol: f64) -> Result<LatticeDecayReport> {
    require_probability(omega)?;
    if omega.support() == [0] {
        return Err(Error::Precondition("the point mass at 0 has compact support group".into()));
    }
    let run = run_powers(omega, n, SUPPORT_CAP)?;
    let max_pairing = run.cesaro.window_max(window);
    Ok(LatticeDecayReport { n, window, max_pairing, passes: max_pairing <= tol })
}

/// Evaluates the three conditions "Cesàro sums vanish", "powers vanish"
/// and "`G_ω` is not compact" at scale `n_max` over the window, and reports
/// whether they agree at threshold `eps`.
pub fn mukherjea_lattice(omega: &LatticeMeasure, window: i64, n_max: usize, eps: f64) -> Result<MukherjeaReport> {
    mukherjea_lattice_capped(omega, window, n_max, eps, SUPPORT_CAP)
}

pub fn mukherjea_lattice_capped(
    omega: &LatticeMeasure,
    window: i64,
    n_max: usize,
    eps: f64,
    cap: usize,
) -> Result<MukherjeaReport> {
    require_probability(omega)?;
    let compact = omega.support().iter().all(|&n| n == 0);
    let run = run_powers(omega, n_max.max(2), cap)?;
    let cesaro_window_max = run.cesaro.window_max(window);
    let power_window_max = run.last.window_max(window).max(run.before_last.window_max(window));
    let cesaro_decays = cesaro_window_max <= eps;
    let powers_decay = power_window_max <= eps;
    Ok(MukherjeaReport {
        n_max: n_max.max(2),
        window,
        compact,
        cesaro_window_max,
        power_window_max,
        cesaro_decays,
        powers_decay,
        consistent: cesaro_decays == powers_decay && cesaro_decays == !compact,
    })
}
