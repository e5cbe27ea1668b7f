//! Tool configuration: estimator constants and simulation defaults.
//!
//! Loaded from a TOML file with `[estimators]` and `[simulation]` sections.
//! Every key is optional; missing keys take the built-in defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::decision::{TieBreak, DEFAULT_THRESHOLD};
use crate::error::{ModelError, Result};
use crate::estimators::EstimatorConstants;
use crate::simulate::{MovementModel, DEFAULT_MAX_STEPS};

/// Environment variable naming the config file when `--config` is absent.
pub const CONFIG_ENV: &str = "FOURNET_CONFIG";

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub estimators: EstimatorConstants,
    pub simulation: SimulationSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSettings {
    pub max_steps: u32,
    pub threshold: f64,
    pub tie_break: TieBreak,
    pub movement: MovementModel,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        Self {
            max_steps: DEFAULT_MAX_STEPS,
            threshold: DEFAULT_THRESHOLD,
            tie_break: TieBreak::default(),
            movement: MovementModel::default(),
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config =
            toml::from_str(text).map_err(|e| ModelError::InvalidState(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is serialisable")
    }

    pub fn validate(&self) -> Result<()> {
        self.estimators.validate()?;
        let sim = &self.simulation;
        if sim.max_steps == 0 {
            return Err(ModelError::ValueOutOfRange {
                field: "max_steps",
                value: 0.0,
            });
        }
        if !(0.0..=1.0).contains(&sim.threshold) {
            return Err(ModelError::ValueOutOfRange {
                field: "threshold",
                value: sim.threshold,
            });
        }
        if !(sim.movement.drift_m.is_finite() && sim.movement.drift_m >= 0.0) {
            return Err(ModelError::ValueOutOfRange {
                field: "drift_m",
                value: sim.movement.drift_m,
            });
        }
        Ok(())
    }

    /// The config file to use: `explicit`, else `$FOURNET_CONFIG`, else none.
    pub fn resolve_path(explicit: Option<&Path>) -> Option<PathBuf> {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_defaults() {
        assert_eq!(Config::from_toml("").unwrap(), Config::default());
    }

    #[test]
    fn overrides_nested_keys() {
        let cfg = Config::from_toml(
            "[estimators]\npass_decay_m = 25.0\n\n[simulation]\nmax_steps = 12\ntie_break = \"highest-id\"\n\n[simulation.movement]\ndrift_m = 1.5\n",
        )
        .unwrap();
        assert_eq!(cfg.estimators.pass_decay_m, 25.0);
        assert_eq!(cfg.estimators.score_decay_m, 20.0);
        assert_eq!(cfg.simulation.max_steps, 12);
        assert_eq!(cfg.simulation.tie_break, TieBreak::HighestId);
        assert_eq!(cfg.simulation.movement.drift_m, 1.5);
    }

    #[test]
    fn rejects_bad_values_and_unknown_keys() {
        assert!(Config::from_toml("[simulation]\nmax_steps = 0\n").is_err());
        assert!(Config::from_toml("[simulation]\nthreshold = 1.5\n").is_err());
        assert!(Config::from_toml("[estimators]\nlane_half_width_m = -2.0\n").is_err());
        assert!(Config::from_toml("[estimators]\nunknown = 1.0\n").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = Config::default();
        assert_eq!(Config::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }
}
