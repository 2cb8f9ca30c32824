use std::fmt;
use std::str::FromStr;

use convfix_core::measure::{parse_lattice_literal, LatticeMeasure};
use convfix_core::GroupSpec;
use serde::{Deserialize, Serialize};

/// A verification suite selectable from the config.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Measure,
    Fixedpoint,
    Ideals,
    Lp,
    Lattice,
    Dual,
    AbelianProp,
    MukherjeaDual,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Measure,
        Suite::Fixedpoint,
        Suite::Ideals,
        Suite::Lp,
        Suite::Lattice,
        Suite::Dual,
        Suite::AbelianProp,
        Suite::MukherjeaDual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Measure => "measure",
            Suite::Fixedpoint => "fixedpoint",
            Suite::Ideals => "ideals",
            Suite::Lp => "lp",
            Suite::Lattice => "lattice",
            Suite::Dual => "dual",
            Suite::AbelianProp => "abelian_prop",
            Suite::MukherjeaDual => "mukherjea_dual",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative singular-value threshold for rank decisions.
    pub rank_tol: f64,
    /// Accepted `‖ω̃⋆ω̃ − ω̃‖` for Cesàro limits.
    pub idem_tol: f64,
    /// Accepted `|ω(s) − 1|` for membership in `Z_ω`.
    pub z_tol: f64,
    /// Convergence threshold between consecutive Cesàro extrapolants.
    pub cesaro_eps: f64,
    /// Accepted windowed pairing when judging decay on ℤ.
    pub decay_tol: f64,
    /// Accepted dual Cesàro pairing off `Z_ω` at `n_max`.
    pub pairing_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rank_tol: 1e-10, idem_tol: 1e-8, z_tol: 1e-9, cesaro_eps: 1e-9, decay_tol: 0.05, pairing_tol: 1e-2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// Largest Cesàro index on finite groups and for dual symbols on ℤ.
    pub n_max: usize,
    /// Half-width of the window on ℤ.
    pub window: i64,
    pub support_cap: usize,
    /// Number of convolution powers taken for measures on ℤ.
    pub lattice_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { n_max: 4096, window: 64, support_cap: 20_000, lattice_n: 2048 }
    }
}

/// The single JSON document that drives `convfix run`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub groups: Vec<String>,
    pub draws_per_group: u64,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub limits: Limits,
    pub suites: Vec<Suite>,
    /// Probability measures on ℤ for the lattice suite, as `n:weight`
    /// literals.
    pub lattice_measures: Vec<String>,
    /// Extra seeded random walks on ℤ for the lattice suite.
    pub lattice_draws: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            groups: GroupSpec::builtins().iter().map(ToString::to_string).collect(),
            draws_per_group: 200,
            seed: 0,
            tolerances: Tolerances::default(),
            limits: Limits::default(),
            suites: Suite::ALL.to_vec(),
            lattice_measures: vec!["-1:0.5, 1:0.5".into(), "0:1".into()],
            lattice_draws: 8,
        }
    }
}

/// A config problem, located by line and column or by field path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn field(location: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError { location: location.into(), message: message.into() }
}

impl ScenarioConfig {
    /// Parses and validates a config document.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: ScenarioConfig = serde_json::from_str(text)
            .map_err(|e| field(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (i, spec) in self.group_specs_raw().enumerate() {
            if let Err(e) = spec {
                return Err(field(format!("groups[{i}]"), e.to_string()));
            }
        }
        if self.draws_per_group < 1 {
            return Err(field("draws_per_group", "must be at least 1"));
        }
        let t = &self.tolerances;
        for (name, value) in [
            ("rank_tol", t.rank_tol),
            ("idem_tol", t.idem_tol),
            ("z_tol", t.z_tol),
            ("cesaro_eps", t.cesaro_eps),
            ("decay_tol", t.decay_tol),
            ("pairing_tol", t.pairing_tol),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(field(format!("tolerances.{name}"), format!("must be positive, got {value}")));
            }
        }
        let l = &self.limits;
        if l.n_max < 1 || l.window < 0 || l.support_cap < 1 || l.lattice_n < 4 {
            return Err(field("limits", "n_max ≥ 1, window ≥ 0, support_cap ≥ 1 and lattice_n ≥ 4 are required"));
        }
        if self.suites.is_empty() {
            return Err(field("suites", "at least one suite is required"));
        }
        for (i, text) in self.lattice_measures.iter().enumerate() {
            let w = parse_lattice_literal(text).map_err(|e| field(format!("lattice_measures[{i}]"), e.to_string()))?;
            if !w.is_probability(1e-12) {
                return Err(field(format!("lattice_measures[{i}]"), "must be a probability measure"));
            }
        }
        Ok(())
    }

    fn group_specs_raw(&self) -> impl Iterator<Item = convfix_core::Result<GroupSpec>> + '_ {
        self.groups.iter().map(|s| {
            let spec = GroupSpec::from_str(s)?;
            spec.validate()?;
            Ok(spec)
        })
    }

    pub fn group_specs(&self) -> Vec<GroupSpec> {
        self.group_specs_raw().map(|s| s.expect("validated")).collect()
    }

    pub fn lattice(&self) -> Vec<LatticeMeasure> {
        self.lattice_measures.iter().map(|t| parse_lattice_literal(t).expect("validated")).collect()
    }

    pub fn has_suite(&self, suite: Suite) -> bool {
        self.suites.contains(&suite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let c = ScenarioConfig::parse("{}").unwrap();
        assert_eq!(c, ScenarioConfig::default());
        assert_eq!(c.groups.len(), 9);
        assert_eq!(c.draws_per_group, 200);
        assert_eq!(c.suites.len(), 8);
    }

    #[test]
    fn suites_by_name() {
        let c = ScenarioConfig::parse(r#"{"suites": ["lattice", "abelian_prop", "mukherjea_dual"]}"#).unwrap();
        assert_eq!(c.suites, vec![Suite::Lattice, Suite::AbelianProp, Suite::MukherjeaDual]);
    }

    #[test]
    fn unknown_suite_is_rejected_with_position() {
        let e = ScenarioConfig::parse("{\n  \"suites\": [\"fixedpoint\", \"spectral\"]\n}").unwrap_err();
        assert_eq!(e.location, "line 2 column 37");
        assert!(e.message.contains("spectral"), "{e}");
    }

    #[test]
    fn unknown_field_is_rejected() {
        let e = ScenarioConfig::parse(r#"{"draws": 3}"#).unwrap_err();
        assert!(e.message.contains("draws"), "{e}");
    }

    #[test]
    fn malformed_group_names_its_index() {
        let e = ScenarioConfig::parse(r#"{"groups": ["cyclic:4", "cyclic:-1"]}"#).unwrap_err();
        assert_eq!(e.location, "groups[1]");
    }

    #[test]
    fn tolerances_must_be_positive() {
        let e = ScenarioConfig::parse(r#"{"tolerances": {"z_tol": 0}}"#).unwrap_err();
        assert_eq!(e.location, "tolerances.z_tol");
        let e = ScenarioConfig::parse(r#"{"draws_per_group": 0}"#).unwrap_err();
        assert_eq!(e.location, "draws_per_group");
    }

    #[test]
    fn lattice_measures_must_be_probabilities() {
        let e = ScenarioConfig::parse(r#"{"lattice_measures": ["-1:0.5, 1:-0.5"]}"#).unwrap_err();
        assert_eq!(e.location, "lattice_measures[0]");
    }
}
