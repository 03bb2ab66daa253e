use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::scenarios::Scenario;
use crate::{CliError, Result};

pub const DEFAULT_SEED: u64 = 42;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// Scenario-specific knobs. Each scenario reads the ones it understands and
/// fills in its own defaults for the rest.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    /// `"lo:hi:step"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub plot: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ScenarioConfig {
    pub fn new(scenario: &str) -> Self {
        Self {
            scenario: scenario.to_string(),
            parameters: Parameters::default(),
            seed: DEFAULT_SEED,
            output: OutputConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(CliError::from_json)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.parse::<Scenario>()?;
        let p = &self.parameters;
        for (name, v) in [
            ("dim", p.dim),
            ("horizon", p.horizon),
            ("blocks", p.blocks),
            ("trials", p.trials),
            ("samples", p.samples),
        ] {
            if v == Some(0) {
                return Err(CliError::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if let Some(g) = &p.grid {
            parse_grid(g)?;
        }
        if let Some(s) = p.eps_scale {
            if !(s.is_finite() && s > 0.0) {
                return Err(CliError::InvalidConfig(format!("eps_scale {s} must be positive")));
            }
        }
        Ok(())
    }
}

/// `"lo:hi:step"` with `lo < hi` and `step > 0`.
pub fn parse_grid(text: &str) -> Result<(f64, f64, f64)> {
    let bad = || CliError::InvalidConfig(format!("grid {text:?} must be lo:hi:step"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match parts.as_slice() {
        &[lo, hi, step] if lo.is_finite() && hi.is_finite() && lo < hi && step > 0.0 && step.is_finite() => {
            Ok((lo, hi, step))
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_defaults_and_unknown_keys() {
        let c = ScenarioConfig::from_json(r#"{"scenario":"theorem5_check"}"#).unwrap();
        assert_eq!(c.seed, 42);
        assert!(matches!(
            ScenarioConfig::from_json(r#"{"scenario":"theorem5_check","colour":1}"#),
            Err(CliError::ParseError { .. })
        ));
        assert!(matches!(
            ScenarioConfig::from_json(r#"{"scenario":"theorem5_check","parameters":{"dimm":3}}"#),
            Err(CliError::ParseError { .. })
        ));
        assert!(matches!(
            ScenarioConfig::from_json(r#"{"scenario":"example9"}"#),
            Err(CliError::UnknownScenario(_))
        ));
        assert!(matches!(
            ScenarioConfig::from_json(r#"{"scenario":"example3","parameters":{"horizon":0}}"#),
            Err(CliError::InvalidConfig(_))
        ));
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("-2.5:2.5:0.05").unwrap(), (-2.5, 2.5, 0.05));
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:-1").is_err());
    }
}
