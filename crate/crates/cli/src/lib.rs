//! Scenario-driven runner for the convfix verification suites.
//!
//! The binary `convfix` is a thin layer over this crate: [`config`] parses
//! the scenario document, [`suites`] turns it into cases and evaluates
//! them, [`record`] wraps outcomes into replayable report lines and
//! [`explain`] re-runs a single case verbosely.

pub mod config;
pub mod explain;
pub mod json;
pub mod record;
pub mod run;
pub mod suites;

pub use config::{ScenarioConfig, Suite};
pub use record::ReportRecord;
pub use suites::{CaseInputs, Verdict};
