use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Result;
use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::json;
use crate::record::{run_case, ReportRecord};
use crate::suites::{build_cases, Verdict};

/// Runs every case of `config` and returns the records sorted by
/// `(suite, case_id)`, independent of completion order.
pub fn run_suites(config: &ScenarioConfig) -> Result<Vec<ReportRecord>> {
    let cases = build_cases(config)?;
    let mut records: Vec<ReportRecord> = cases.par_iter().map(run_case).collect();
    records.sort_by(|a, b| (a.suite.name(), &a.case_id).cmp(&(b.suite.name(), &b.case_id)));
    Ok(records)
}

pub fn write_report<W: Write>(records: &[ReportRecord], out: &mut W) -> Result<()> {
    for r in records {
        writeln!(out, "{}", json::to_line(r)?)?;
    }
    Ok(())
}

pub fn write_summary<W: Write>(records: &[ReportRecord], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer.serialize(r.summary_row())?;
    }
    writer.flush()?;
    Ok(())
}

/// Pass, fail and undecided counts per suite.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Totals {
    pub per_suite: BTreeMap<&'static str, [usize; 3]>,
}

impl Totals {
    pub fn of(records: &[ReportRecord]) -> Self {
        let mut per_suite: BTreeMap<&'static str, [usize; 3]> = BTreeMap::new();
        for r in records {
            let slot = match r.verdict {
                Verdict::Pass => 0,
                Verdict::Fail => 1,
                Verdict::Undecided => 2,
            };
            per_suite.entry(r.suite.name()).or_default()[slot] += 1;
        }
        Self { per_suite }
    }

    pub fn failures(&self) -> usize {
        self.per_suite.values().map(|c| c[1]).sum()
    }

    pub fn render(&self) -> String {
        let mut out = format!("{:<16} {:>8} {:>8} {:>10}\n", "suite", "pass", "fail", "undecided");
        let mut total = [0; 3];
        for (suite, c) in &self.per_suite {
            out.push_str(&format!("{suite:<16} {:>8} {:>8} {:>10}\n", c[0], c[1], c[2]));
            for i in 0..3 {
                total[i] += c[i];
            }
        }
        out.push_str(&format!("{:<16} {:>8} {:>8} {:>10}\n", "total", total[0], total[1], total[2]));
        out
    }
}
