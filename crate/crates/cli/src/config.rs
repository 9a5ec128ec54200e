//! Strict JSON scenario configuration.
//!
//! A config file is a single object with a `task` tag and task-specific
//! fields; unknown fields are rejected so typos in physics parameters
//! cannot pass silently.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use dce_core::{CavityGeometry, FrequencyMethod, ModeIndex, PermittivityPair};

/// Lowest-modes table of a static cavity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub geometry: CavityGeometry,
    pub permittivity: PermittivityPair,
    /// How many of the lowest modes to solve (ignored when `modes` is
    /// given).
    #[serde(default)]
    pub count: Option<usize>,
    /// Explicit mode list, solved in the given order.
    #[serde(default)]
    pub modes: Option<Vec<ModeIndex>>,
}

/// First-order residuals over a slab-fraction sweep, with error-order
/// fits per mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub l: f64,
    pub l_y: f64,
    pub l_z: f64,
    pub a_over_l: Vec<f64>,
    pub permittivity: PermittivityPair,
    pub modes: Vec<ModeIndex>,
}

/// Harmonic drive parameters; the drive frequency is derived from the
/// resonance condition of the configured mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    pub xi: f64,
    pub chi: f64,
    pub eps_bulk: f64,
    pub delta: f64,
}

/// Resonantly driven single-mode evolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub geometry: CavityGeometry,
    pub mode: ModeIndex,
    pub drive: DriveConfig,
    pub periods: u32,
    pub steps_per_period: u32,
    pub method: FrequencyMethod,
    /// Double the step count on Wronskian-drift failures instead of
    /// erroring out.
    #[serde(default = "default_true")]
    pub auto_steps: bool,
}

fn default_true() -> bool {
    true
}

/// Laboratory-scale estimate of the photon creation rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    pub wavelength_cm: f64,
    pub chi_over_eps_bulk: f64,
    pub a_over_l: f64,
    pub target_photons: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioConfig {
    Spectrum(SpectrumConfig),
    Sweep(SweepConfig),
    Evolve(EvolveConfig),
    Estimate(EstimateConfig),
}

impl ScenarioConfig {
    pub fn task_name(&self) -> &'static str {
        match self {
            ScenarioConfig::Spectrum(_) => "spectrum",
            ScenarioConfig::Sweep(_) => "sweep",
            ScenarioConfig::Evolve(_) => "evolve",
            ScenarioConfig::Estimate(_) => "estimate",
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).context("config is not valid JSON")?;
        Self::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let Value::Object(mut fields) = value else {
            bail!("config must be a JSON object");
        };
        let Some(task) = fields.remove("task") else {
            bail!("config is missing the `task` field");
        };
        let Value::String(task) = task else {
            bail!("`task` must be a string");
        };
        let rest = Value::Object(fields);
        let parsed = match task.as_str() {
            "spectrum" => ScenarioConfig::Spectrum(
                serde_json::from_value(rest).context("in spectrum config")?,
            ),
            "sweep" => {
                ScenarioConfig::Sweep(serde_json::from_value(rest).context("in sweep config")?)
            }
            "evolve" => {
                ScenarioConfig::Evolve(serde_json::from_value(rest).context("in evolve config")?)
            }
            "estimate" => ScenarioConfig::Estimate(
                serde_json::from_value(rest).context("in estimate config")?,
            ),
            other => bail!("unknown task `{other}` (expected spectrum, sweep, evolve, estimate)"),
        };
        Ok(parsed)
    }

    /// Full echo of the config, `task` tag included. Keys serialize in
    /// sorted order, so the echo is byte-stable.
    pub fn to_value(&self) -> Value {
        let (task, mut value) = match self {
            ScenarioConfig::Spectrum(c) => ("spectrum", serde_json::to_value(c).unwrap()),
            ScenarioConfig::Sweep(c) => ("sweep", serde_json::to_value(c).unwrap()),
            ScenarioConfig::Evolve(c) => ("evolve", serde_json::to_value(c).unwrap()),
            ScenarioConfig::Estimate(c) => ("estimate", serde_json::to_value(c).unwrap()),
        };
        value
            .as_object_mut()
            .unwrap()
            .insert("task".into(), Value::String(task.into()));
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spectrum_config() {
        let text = r#"{
            "task": "spectrum",
            "geometry": {"l": 1.0, "l_y": 1.0, "l_z": 1.0, "a": 0.01},
            "permittivity": {"eps_slab": 0.5, "eps_bulk": 1.0},
            "count": 10
        }"#;
        let cfg = ScenarioConfig::from_json(text).unwrap();
        assert_eq!(cfg.task_name(), "spectrum");
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = r#"{
            "task": "spectrum",
            "geometry": {"l": 1.0, "l_y": 1.0, "l_z": 1.0, "a": 0.01},
            "permittivity": {"eps_slab": 0.5, "eps_bulk": 1.0},
            "cuont": 10
        }"#;
        let err = ScenarioConfig::from_json(text).unwrap_err();
        assert!(format!("{err:#}").contains("cuont"), "{err:#}");
        // typo inside a nested physics struct
        let text = r#"{
            "task": "spectrum",
            "geometry": {"l": 1.0, "l_y": 1.0, "l_zz": 1.0, "a": 0.01},
            "permittivity": {"eps_slab": 0.5, "eps_bulk": 1.0}
        }"#;
        assert!(ScenarioConfig::from_json(text).is_err());
    }

    #[test]
    fn rejects_missing_or_unknown_task() {
        assert!(ScenarioConfig::from_json(r#"{"count": 3}"#).is_err());
        assert!(ScenarioConfig::from_json(r#"{"task": "spectre"}"#).is_err());
    }

    #[test]
    fn round_trips_through_echo() {
        let text = r#"{
            "task": "evolve",
            "geometry": {"l": 1.0, "l_y": 1.0, "l_z": 1.0, "a": 0.01},
            "mode": {"n_x": 1, "n_y": 1, "n_z": 0, "pol": "TM"},
            "drive": {"xi": 1.0, "chi": 0.01, "eps_bulk": 1.0, "delta": 0.0},
            "periods": 100,
            "steps_per_period": 512,
            "method": "first_order"
        }"#;
        let cfg = ScenarioConfig::from_json(text).unwrap();
        let echoed = ScenarioConfig::from_value(cfg.to_value()).unwrap();
        assert_eq!(cfg, echoed);
    }
}
