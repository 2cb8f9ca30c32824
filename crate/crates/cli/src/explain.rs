use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use convfix_core::fixed_point::{fixed_subspace, verify_fixed_points};
use convfix_core::measure::{cesaro, cesaro_limit, classify_idempotent, Classification, MeasureJson};
use convfix_core::{CesaroVerdict, Complex64, ComplexMeasure, FiniteMeasure};
use serde_json::Value;

use crate::config::Suite;
use crate::record::{run_case, ReportRecord};
use crate::suites::CaseInputs;

/// Reads a replay document: a report record, bare case inputs, or a bare
/// measure (replayed through the fixed-point suite).
pub fn parse_replay(text: &str) -> Result<CaseInputs> {
    let value: Value = serde_json::from_str(text).context("replay file is not JSON")?;
    if value.get("artifacts").is_some() {
        let record: ReportRecord = serde_json::from_value(value).context("malformed report record")?;
        return record.inputs().context("record has no replayable inputs");
    }
    if value.get("suite").is_some() {
        return serde_json::from_value(value).context("malformed case inputs");
    }
    if value.get("atoms").is_some() {
        let measure: MeasureJson = serde_json::from_value(value).context("malformed measure")?;
        return Ok(CaseInputs {
            suite: Suite::Fixedpoint,
            case_id: "replay".into(),
            seed: None,
            measure: Some(measure),
            dual: None,
            tolerances: Default::default(),
            limits: Default::default(),
        });
    }
    bail!("expected a report record, case inputs or a measure")
}

/// Finds `(suite, case_id)` in a JSON-lines report.
pub fn find_case(report: &str, suite: Suite, case_id: &str) -> Result<CaseInputs> {
    for (i, line) in report.lines().enumerate() {
        let record: ReportRecord = serde_json::from_str(line).with_context(|| format!("report line {}", i + 1))?;
        if record.suite == suite && record.case_id == case_id {
            return Ok(record.inputs()?);
        }
    }
    Err(anyhow!("unknown case id `{case_id}` in suite {suite}"))
}

fn complex(z: Complex64) -> String {
    format!("{:+.6}{:+.6}i", z.re, z.im)
}

fn describe_measure(w: &FiniteMeasure) -> String {
    let g = w.group();
    let atoms: Vec<String> =
        w.support().iter().map(|&s| format!("{}: {}", g.label(s), complex(w.coeff(s)))).collect();
    if atoms.is_empty() {
        "0".into()
    } else {
        atoms.join(", ")
    }
}

fn describe_finite(out: &mut String, inputs: &CaseInputs, w: &FiniteMeasure) -> Result<()> {
    let g = w.group();
    let opts = inputs.engine_options();
    writeln!(out, "group      {} (order {})", g.name(), g.order())?;
    writeln!(out, "ω          {}", describe_measure(w))?;
    writeln!(out, "|ω|        {}", describe_measure(&w.absolute_value()))?;
    writeln!(out, "‖ω‖        {:.17}", w.tv_norm())?;

    let report = verify_fixed_points(w, &opts)?;
    match (&report.character, &report.conflict) {
        (Some(chi), _) => {
            let values: Vec<String> = chi.iter().map(|(s, v)| format!("χ({}) = {}", g.label(s), complex(v))).collect();
            writeln!(out, "character  {}", values.join(", "))?;
        }
        (None, Some(conflict)) => writeln!(out, "character  none, conflict witness {conflict}")?,
        (None, None) => writeln!(out, "character  none (zero measure)")?,
    }

    let trace = cesaro_limit(&ComplexMeasure::Finite(w.clone()), &opts.cesaro)?;
    writeln!(out, "Cesàro     {} (eps {:e}, n_max {})", trace.verdict.label(), opts.cesaro.eps, opts.cesaro.n_max)?;
    for (n, r) in &trace.residuals {
        writeln!(out, "  n = {n:>6}  extrapolant residual {r:.3e}")?;
    }
    if let CesaroVerdict::ConvergedTo(limit) = &trace.verdict {
        let limit = limit.as_finite()?;
        writeln!(out, "ω̃          {}", describe_measure(limit))?;
        if let Classification::Greenleaf { subgroup, character, .. } = classify_idempotent(limit, inputs.tolerances.idem_tol) {
            let labels: Vec<&str> = subgroup.elements().iter().map(|&h| g.label(h)).collect();
            let trivial = character.is_trivial(1e-12);
            let kind = if trivial { "m_H" } else { "χ·m_H" };
            let suffix = if trivial && subgroup.is_whole() { format!(" = m_{{{}}}", g.name()) } else { String::new() };
            writeln!(out, "           = {kind} with H = {{{}}}{suffix}", labels.join(", "))?;
        }
        if let ComplexMeasure::Finite(s) = cesaro(&ComplexMeasure::Finite(w.clone()), opts.cesaro.n_max)? {
            writeln!(out, "‖S_{} − ω̃‖ = {:.3e}", opts.cesaro.n_max, s.tv_distance(limit)?)?;
        }
    }

    let abs_fix = fixed_subspace(&w.absolute_value(), opts.rank_tol);
    writeln!(out, "dim Fix L_ω   {}", report.dim_fix)?;
    writeln!(out, "dim Fix L_|ω| {}", abs_fix.subspace.dim())?;
    if let Some(predicted) = report.residuals.get("predicted_dim") {
        writeln!(out, "dim predicted {predicted}")?;
    }
    writeln!(out, "principal angles and fit residuals")?;
    for (name, value) in report.residuals.iter().filter(|(k, _)| k.as_str() != "predicted_dim") {
        writeln!(out, "  {name:<20} {value:.3e}")?;
    }
    Ok(())
}

/// Re-runs one case verbosely and returns the text together with the
/// recomputed record.
pub fn explain(inputs: &CaseInputs) -> Result<(String, ReportRecord)> {
    let mut out = String::new();
    writeln!(out, "suite      {}", inputs.suite)?;
    writeln!(out, "case       {}", inputs.case_id)?;
    match inputs.measure.as_ref().map(ComplexMeasure::from_json).transpose()? {
        Some(ComplexMeasure::Finite(w)) => describe_finite(&mut out, inputs, &w)?,
        Some(ComplexMeasure::Lattice(w)) => {
            let atoms: Vec<String> = w.atoms().iter().map(|(n, c)| format!("{n}: {}", complex(*c))).collect();
            writeln!(out, "ω on ℤ     {}", atoms.join(", "))?;
        }
        None => {}
    }
    if let Some(d) = &inputs.dual {
        writeln!(out, "dual       {} with certificate {} (norm {:?})", d.carrier, d.certificate.kind, d.certificate.norm)?;
    }
    let record = run_case(inputs);
    writeln!(out, "verdict    {}", record.verdict.name())?;
    writeln!(out, "residuals")?;
    for (name, value) in &record.residuals {
        writeln!(out, "  {name:<22} {value:.16e}")?;
    }
    if let Some(error) = record.artifacts.get("error") {
        writeln!(out, "error      {error}")?;
    }
    Ok((out, record))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_measure_replays_through_fixedpoint() {
        let inputs = parse_replay(r#"{"carrier": "cyclic:4", "atoms": [{"g": 0, "re": 1.0, "im": 0.0}]}"#).unwrap();
        assert_eq!(inputs.suite, Suite::Fixedpoint);
        let (text, record) = explain(&inputs).unwrap();
        assert!(text.contains("dim Fix L_ω   4"), "{text}");
        assert_eq!(record.verdict.name(), "pass");
    }

    #[test]
    fn conflict_witness_is_shown() {
        let text = r#"{"suite": "fixedpoint", "measure": {"carrier": "cyclic:4",
            "atoms": [{"g": 1, "re": 0.5, "im": 0.0}, {"g": 3, "re": -0.5, "im": 0.0}]}}"#;
        let (out, _) = explain(&parse_replay(text).unwrap()).unwrap();
        assert!(out.contains("χ(3)=χ(1)³"), "{out}");
    }

    #[test]
    fn rejects_other_documents() {
        assert!(parse_replay(r#"{"hello": 1}"#).is_err());
        assert!(parse_replay("not json").is_err());
    }
}
