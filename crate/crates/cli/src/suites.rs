//! Case generation and evaluation for every suite.
//!
//! A case is fully described by its [`CaseInputs`]; evaluation is a pure
//! function of them, which is what makes `explain` reproduce a record
//! exactly.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use convfix_core::dual::{
    abelian_prop_check, mukherjea_dual, random_dual, vn_fixed_space, z_set, AtomicToralMeasure, DualFunction, DualJson,
    TestFunction,
};
use convfix_core::fixed_point::{
    cesaro_projection_check, equivalence_suite, ideal_subspace, lp_fixed_points, lp_lattice_decay,
    mukherjea_lattice_capped, verify_fixed_points, EngineOptions,
};
use convfix_core::measure::{
    cesaro_limit, classify_idempotent, idempotency_residual, random_contractive, random_lattice, seeded_profile,
    CesaroOptions, Classification, MeasureJson, PhaseStyle, ProfileKind,
};
use convfix_core::{CesaroVerdict, Complex64, ComplexMeasure, Error, FiniteMeasure, GroupTable, LatticeGroup, LatticeMeasure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::config::{Limits, ScenarioConfig, Suite, Tolerances};

/// Accepted `‖ω⋆ω‖ − ‖ω‖²`.
const SUBMULTIPLICATIVE_SLACK: f64 = 1e-12;
/// Accepted `|Σ_g f(g)|` over a basis of `I_ω` for probabilities.
const AUGMENTATION_TOL: f64 = 1e-12;
/// Accepted gap between the computed dual Cesàro pairing and its closed form.
const CLOSED_FORM_TOL: f64 = 1e-10;
const LP_EXPONENTS: [f64; 3] = [1.0, 2.0, 4.0];
const TEST_RADIUS: i64 = 5;

/// Everything needed to re-run one case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseInputs {
    pub suite: Suite,
    #[serde(default = "replay_id")]
    pub case_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualJson>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub limits: Limits,
}

fn replay_id() -> String {
    "replay".into()
}

impl CaseInputs {
    pub fn carrier(&self) -> String {
        match (&self.measure, &self.dual) {
            (Some(m), _) => m.carrier.clone(),
            (None, Some(d)) => d.carrier.clone(),
            (None, None) => String::new(),
        }
    }

    pub fn finite_measure(&self) -> Result<FiniteMeasure> {
        let json = self.measure.as_ref().ok_or_else(|| anyhow!("case has no measure"))?;
        Ok(ComplexMeasure::from_json(json)?.as_finite()?.clone())
    }

    fn lattice_measure(&self) -> Result<LatticeMeasure> {
        let json = self.measure.as_ref().ok_or_else(|| anyhow!("case has no measure"))?;
        match ComplexMeasure::from_json(json)? {
            ComplexMeasure::Lattice(w) => Ok(w),
            ComplexMeasure::Finite(_) => bail!("the lattice suite needs a measure on Z"),
        }
    }

    fn dual_function(&self) -> Result<DualFunction> {
        let json = self.dual.as_ref().ok_or_else(|| anyhow!("case has no dual function"))?;
        Ok(DualFunction::from_json(json)?)
    }

    pub fn engine_options(&self) -> EngineOptions {
        EngineOptions {
            rank_tol: self.tolerances.rank_tol,
            cesaro: CesaroOptions {
                eps: self.tolerances.cesaro_eps,
                n_max: self.limits.n_max,
                window: self.limits.window,
                support_cap: self.limits.support_cap,
            },
            ..EngineOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Undecided => "undecided",
        }
    }
}

/// Outcome of one case before it is wrapped into a report record.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub verdict: Verdict,
    pub residuals: BTreeMap<String, f64>,
    pub artifacts: Map<String, Value>,
}

impl Evaluation {
    fn new() -> Self {
        Self { verdict: Verdict::Pass, residuals: BTreeMap::new(), artifacts: Map::new() }
    }

    fn residual(&mut self, name: &str, value: f64) {
        self.residuals.insert(name.to_string(), value);
    }

    fn artifact(&mut self, name: &str, value: impl Serialize) {
        self.artifacts.insert(name.to_string(), serde_json::to_value(value).expect("artifacts serialize"));
    }

    fn fail_unless(&mut self, ok: bool) {
        if !ok {
            self.verdict = Verdict::Fail;
        }
    }

    fn undecided_unless(&mut self, ok: bool) {
        if !ok && self.verdict == Verdict::Pass {
            self.verdict = Verdict::Undecided;
        }
    }
}

/// Enumerates the cases selected by `config`, in no particular order.
pub fn build_cases(config: &ScenarioConfig) -> Result<Vec<CaseInputs>> {
    let mut cases = Vec::new();
    let base = |suite: Suite, case_id: String, seed: Option<u64>| CaseInputs {
        suite,
        case_id,
        seed,
        measure: None,
        dual: None,
        tolerances: config.tolerances,
        limits: config.limits,
    };
    let finite_suites = [Suite::Measure, Suite::Fixedpoint, Suite::Ideals, Suite::Lp, Suite::AbelianProp];
    for spec in config.group_specs() {
        let group = Arc::new(GroupTable::build(&spec)?);
        for offset in 0..config.draws_per_group {
            let seed = config.seed.wrapping_add(offset);
            let case_id = format!("{}/{offset:06}", group.name());
            let kind = ProfileKind::ALL[(offset % 3) as usize];
            let measure = random_contractive(&group, seed, &seeded_profile(&group, kind, seed)).to_json();
            for suite in finite_suites {
                if !config.has_suite(suite) || (suite == Suite::AbelianProp && !group.is_abelian()) {
                    continue;
                }
                cases.push(CaseInputs { measure: Some(measure.clone()), ..base(suite, case_id.clone(), Some(seed)) });
            }
            if config.has_suite(Suite::Dual) {
                let dual = random_dual(&group, seed).to_json();
                cases.push(CaseInputs { dual: Some(dual), ..base(Suite::Dual, case_id.clone(), Some(seed)) });
            }
        }
    }
    if config.has_suite(Suite::Lattice) {
        for (i, w) in config.lattice().into_iter().enumerate() {
            let case_id = format!("fixture/{i:03}");
            cases.push(CaseInputs { measure: Some(w.to_json()), ..base(Suite::Lattice, case_id, None) });
        }
        for i in 0..config.lattice_draws {
            let seed = config.seed.wrapping_add(i);
            let w = random_lattice(seed, 3, 0.6, &PhaseStyle::Complex).absolute_value();
            let case_id = format!("draw/{i:03}");
            cases.push(CaseInputs { measure: Some(w.to_json()), ..base(Suite::Lattice, case_id, Some(seed)) });
        }
    }
    if config.has_suite(Suite::MukherjeaDual) {
        for offset in 0..config.draws_per_group {
            let seed = config.seed.wrapping_add(offset);
            let d = DualFunction::lattice(seeded_symbol(seed, offset)?, LatticeGroup::new(TEST_RADIUS)?);
            let case_id = format!("integers/{offset:06}");
            cases.push(CaseInputs { dual: Some(d.to_json()), ..base(Suite::MukherjeaDual, case_id, Some(seed)) });
        }
    }
    Ok(cases)
}

/// A unit-norm atomic measure on the circle, so that `ω(n) = Σ c_j e^{inθ_j}`.
///
/// Draws cycle through rational rotations with `c = 1` (nonempty `Z_ω`),
/// a single twisted irrational rotation, and a two-atom blend.
fn seeded_symbol(seed: u64, offset: u64) -> Result<AtomicToralMeasure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = match offset % 3 {
        0 => {
            let q = rng.random_range(1..=6u32);
            let p = rng.random_range(0..q);
            vec![(Complex64::new(1.0, 0.0), TAU * p as f64 / q as f64)]
        }
        1 => vec![(Complex64::from_polar(1.0, rng.random_range(0.0..TAU)), rng.random_range(0.0..TAU))],
        _ => {
            let a = rng.random_range(0.1..0.9);
            vec![
                (Complex64::from_polar(a, rng.random_range(0.0..TAU)), rng.random_range(0.0..TAU)),
                (Complex64::from_polar(1.0 - a, rng.random_range(0.0..TAU)), rng.random_range(0.0..TAU)),
            ]
        }
    };
    Ok(AtomicToralMeasure::new(atoms)?)
}

/// Point masses on `[-5, 5]` and one weighted combination of them.
pub fn dual_test_functions() -> Vec<TestFunction> {
    let mut tests: Vec<TestFunction> = (-TEST_RADIUS..=TEST_RADIUS).map(|m| vec![(m, Complex64::new(1.0, 0.0))]).collect();
    tests.push((-TEST_RADIUS..=TEST_RADIUS).map(|m| (m, Complex64::new(1.0 / (1.0 + m.abs() as f64), 0.0))).collect());
    tests
}

/// Runs one case. Library errors become `fail` verdicts carrying the
/// message, except unmet Cesàro preconditions, which are `undecided`.
pub fn evaluate(inputs: &CaseInputs) -> Evaluation {
    match evaluate_inner(inputs) {
        Ok(e) => e,
        Err(err) => {
            let mut e = Evaluation::new();
            e.verdict = Verdict::Fail;
            e.artifact("error", format!("{err:#}"));
            e
        }
    }
}

fn evaluate_inner(inputs: &CaseInputs) -> Result<Evaluation> {
    match inputs.suite {
        Suite::Measure => measure_case(inputs),
        Suite::Fixedpoint => fixedpoint_case(inputs),
        Suite::Ideals => ideals_case(inputs),
        Suite::Lp => lp_case(inputs),
        Suite::Lattice => lattice_case(inputs),
        Suite::Dual => dual_case(inputs),
        Suite::AbelianProp => abelian_case(inputs),
        Suite::MukherjeaDual => mukherjea_dual_case(inputs),
    }
}

fn character_json(pairs: impl Iterator<Item = (usize, Complex64)>) -> BTreeMap<String, [f64; 2]> {
    pairs.map(|(g, v)| (g.to_string(), [v.re, v.im])).collect()
}

fn measure_case(inputs: &CaseInputs) -> Result<Evaluation> {
    let w = inputs.finite_measure()?;
    let opts = inputs.engine_options();
    let mut e = Evaluation::new();
    e.artifact("measure", w.to_json());
    let tv = w.tv_norm();
    e.residual("tv_excess", (tv - 1.0).max(0.0));
    let phase = w.polar_phase();
    let polar = phase
        .iter()
        .map(|(&g, u)| (w.coeff(g) - u * w.coeff(g).norm()).norm())
        .fold(0.0, f64::max);
    e.residual("polar", polar);
    let square = w.convolve(&w)?.tv_norm();
    let gap = square - tv * tv;
    e.residual("submultiplicative_gap", gap.max(0.0));
    e.fail_unless(gap <= SUBMULTIPLICATIVE_SLACK && polar <= opts.polar_tol);

    let trace = cesaro_limit(&ComplexMeasure::Finite(w.clone()), &opts.cesaro)?;
    e.artifact("cesaro", trace.verdict.label());
    if let Some(&(_, r)) = trace.residuals.last() {
        e.residual("cesaro", r);
    }
    match &trace.verdict {
        CesaroVerdict::ConvergedTo(limit) => {
            let idem = idempotency_residual(limit)?;
            e.residual("idempotency", idem);
            let limit = limit.as_finite()?;
            e.artifact("limit", limit.to_json());
            let class = classify_idempotent(limit, inputs.tolerances.idem_tol);
            e.fail_unless(idem <= inputs.tolerances.idem_tol && matches!(class, Classification::Greenleaf { .. }));
            e.artifact("classification", class);
        }
        CesaroVerdict::ConvergedToZero => {}
        CesaroVerdict::Undecided => e.undecided_unless(false),
    }
    Ok(e)
}

fn fixedpoint_case(inputs: &CaseInputs) -> Result<Evaluation> {
    let w = inputs.finite_measure()?;
    let opts = inputs.engine_options();
    let mut e = Evaluation::new();
    let mut report = verify_fixed_points(&w, &opts)?;
    let predicted = report.residuals.remove("predicted_dim").map(|d| d as usize);
    e.artifact("group", w.group().name());
    e.artifact("measure", w.to_json());
    e.artifact("dims", json!({"fix": report.dim_fix, "abs_fix": report.dim_abs_fix, "predicted": predicted}));
    e.artifact("character", report.character.as_ref().map(|chi| character_json(chi.iter())));
    e.artifact("conflict", report.conflict.as_ref().map(|c| c.rendered.clone()));
    e.artifact("near_threshold", report.near_threshold);
    for (k, v) in &report.residuals {
        e.residual(k, *v);
    }
    e.fail_unless(report.passes());

    let equivalence = equivalence_suite(&w, &opts)?;
    e.fail_unless(equivalence.all_equal);
    e.artifact("equivalence", &equivalence);

    match cesaro_projection_check(&w, &opts) {
        Ok(p) => {
            for (k, v) in &p.residuals {
                e.residual(k, *v);
            }
            e.artifact("cesaro", &p.verdict);
            e.fail_unless(p.passes());
        }
        Err(Error::Precondition(_)) => {
            e.artifact("cesaro", "undecided");
            e.undecided_unless(false);
        }
        Err(err) => return Err(err.into()),
    }
    Ok(e)
}

fn ideals_case(inputs: &CaseInputs) -> Result<Evaluation> {
    let w = inputs.finite_measure()?;
    let r = ideal_subspace(&w, &inputs.engine_options());
    let mut e = Evaluation::new();
    e.artifact("measure", w.to_json());
    e.artifact("dims", json!({"ideal": r.dim_ideal, "fix": r.dim_fix, "group": w.group().order()}));
    e.residual("annihilator_angle", r.annihilator_angle);
    if let Some(a) = r.augmentation_residual {
        e.residual("augmentation", a);
    }
    e.fail_unless(r.passes(AUGMENTATION_TOL));
    Ok(e)
}

fn lp_case(inputs: &CaseInputs) -> Result<Evaluation> {
    let w = inputs.finite_measure()?;
    let opts = inputs.engine_options();
    let mut e = Evaluation::new();
    e.artifact("measure", w.to_json());
    let mut dims = Map::new();
    for p in LP_EXPONENTS {
        let r = lp_fixed_points(&w, p, &opts)?;
        if let Some(angle) = r.angle {
            e.residual(&format!("angle_p{p}"), angle);
        }
        dims.insert(format!("p{p}"), json!({"dim": r.dim, "predicted": r.predicted_dim}));
        e.fail_unless(r.matches);
    }
    e.artifact("dims", dims);
    Ok(e)
}

fn lattice_case(inputs: &CaseInputs) -> Result<Evaluation> {
    let w = inputs.lattice_measure()?;
    let (t, l) = (&inputs.tolerances, &inputs.limits);
    let mut e = Evaluation::new();
    e.artifact("measure", w.to_json());
    let square = w.convolve_capped(&w, l.support_cap)?;
    let fourth = square.convolve_capped(&square, l.support_cap)?;
    e.artifact("power4_at_0", fourth.coeff(0).re);
    let m = mukherjea_lattice_capped(&w, l.window, l.lattice_n, t.decay_tol, l.support_cap)?;
    e.residual("cesaro_window_max", m.cesaro_window_max);
    e.residual("power_window_max", m.power_window_max);
    e.fail_unless(m.consistent);
    if !m.compact {
        let decay = lp_lattice_decay(&w, l.window, l.lattice_n, t.decay_tol)?;
        e.fail_unless(decay.passes);
    }
    e.artifact("mukherjea", &m);
    Ok(e)
}

fn dual_case(inputs: &CaseInputs) -> Result<Evaluation> {
    let d = inputs.dual_function()?;
    let eps = inputs.tolerances.z_tol;
    let mut e = Evaluation::new();
    let r = z_set(&d, eps)?;
    let vn = vn_fixed_space(&d, eps)?;
    if let Some(miss) = r.nearest_miss {
        e.residual("nearest_miss", miss);
    }
    if let Some(norm) = r.norm {
        e.residual("norm_excess", (norm - 1.0).max(0.0));
    }
    e.artifact("certificate", d.certificate().kind());
    e.artifact("z_set", &r.z_set);
    e.artifact("coset", json!({"rep": r.rep, "subgroup": r.subgroup.as_ref().map(|h| h.elements().to_vec())}));
    e.artifact("vn_basis", &vn.basis);
    e.fail_unless(r.passes() && vn.matches);
    e.undecided_unless(!r.flagged);
    Ok(e)
}

fn abelian_case(inputs: &CaseInputs) -> Result<Evaluation> {
    let mu = inputs.finite_measure()?;
    let r = abelian_prop_check(&mu, inputs.tolerances.z_tol)?;
    let mut e = Evaluation::new();
    e.artifact("measure", mu.to_json());
    e.artifact("report", &r);
    e.fail_unless(r.passes());
    Ok(e)
}

fn mukherjea_dual_case(inputs: &CaseInputs) -> Result<Evaluation> {
    let d = inputs.dual_function()?;
    let t = &inputs.tolerances;
    let r = mukherjea_dual(&d, &dual_test_functions(), inputs.limits.n_max, t.z_tol, t.pairing_tol)?;
    let mut e = Evaluation::new();
    let worst = |f: fn(&convfix_core::dual::PairingCase) -> f64| r.cases.iter().map(f).fold(0.0, f64::max);
    e.residual("limit_residual", worst(|c| c.limit_residual));
    e.residual("closed_form_error", worst(|c| c.closed_form_error));
    e.residual("bound_excess", worst(|c| (c.limit_residual - c.geometric_bound).max(0.0)));
    e.artifact("z_points", &r.z_points);
    e.artifact("n", r.n);
    let bounded =
        r.cases.iter().all(|c| c.closed_form_error <= CLOSED_FORM_TOL && c.limit_residual <= c.geometric_bound + CLOSED_FORM_TOL);
    e.fail_unless(bounded);
    // slow rotations need more terms than n_max to get under the tolerance
    e.undecided_unless(r.cases.iter().all(|c| c.limit_residual <= t.pairing_tol));
    Ok(e)
}
