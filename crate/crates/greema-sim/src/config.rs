//! Scenario configuration: one JSON document fully describes a run.
//!
//! Parsing is strict (unknown keys are rejected with the offending name
//! and position), omitted fields take documented defaults, and every
//! resolved config passes range validation before an engine sees it.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::absorption::AbsorptionParams;
use crate::error::{Result, SimError};
use crate::fin::FinSchedule;
use crate::soil::UptakeParams;
use crate::stiffness::StiffnessParams;
use crate::swim::{SwimParams, MAX_DT};

/// Which experiment a config describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    SwimWithMaterial,
    SwimWithoutMaterial,
    SoilUptake,
    StiffnessSweep,
}

impl ScenarioKind {
    pub fn is_swim(&self) -> bool {
        matches!(
            self,
            ScenarioKind::SwimWithMaterial | ScenarioKind::SwimWithoutMaterial
        )
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioKind::SwimWithMaterial => "swim_with_material",
            ScenarioKind::SwimWithoutMaterial => "swim_without_material",
            ScenarioKind::SoilUptake => "soil_uptake",
            ScenarioKind::StiffnessSweep => "stiffness_sweep",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fully resolved description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub seed: u64,
    /// Total simulated span \[s\].
    pub duration_s: f64,
    /// Sample step \[s\].
    pub dt_s: f64,
    /// Where exports go; the CLI `--out` flag overrides it.
    pub output_dir: Option<PathBuf>,
    /// Keep every n-th sample when exporting series (averages always use
    /// full resolution).
    pub output_stride: usize,
    pub absorption: AbsorptionParams,
    pub fin: FinSchedule,
    pub swim: SwimParams,
    pub uptake: UptakeParams,
    pub stiffness: StiffnessParams,
}

/// On-disk shape: everything except `kind` and `seed` is optional.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: ScenarioKind,
    seed: u64,
    duration_s: Option<f64>,
    dt_s: Option<f64>,
    output_dir: Option<PathBuf>,
    output_stride: Option<usize>,
    #[serde(default)]
    absorption: AbsorptionParams,
    #[serde(default)]
    fin: FinSchedule,
    #[serde(default)]
    swim: SwimParams,
    #[serde(default)]
    uptake: UptakeParams,
    #[serde(default)]
    stiffness: StiffnessParams,
}

const DEFAULT_DT_S: f64 = 0.005;
/// Swim runs default to this much swimming time past the start delay \[s\].
const DEFAULT_SWIM_SPAN_S: f64 = 60.0;
const DEFAULT_NON_SWIM_DURATION_S: f64 = 60.0;

impl RawConfig {
    fn resolve(self) -> ScenarioConfig {
        let duration_s = self.duration_s.unwrap_or(match self.kind {
            k if k.is_swim() => self.swim.swim_start_delay_s + DEFAULT_SWIM_SPAN_S,
            _ => DEFAULT_NON_SWIM_DURATION_S,
        });
        ScenarioConfig {
            kind: self.kind,
            seed: self.seed,
            duration_s,
            dt_s: self.dt_s.unwrap_or(DEFAULT_DT_S),
            output_dir: self.output_dir,
            output_stride: self.output_stride.unwrap_or(1),
            absorption: self.absorption,
            fin: self.fin,
            swim: self.swim,
            uptake: self.uptake,
            stiffness: self.stiffness,
        }
    }
}

impl ScenarioConfig {
    /// Spec defaults for a kind, with seed 0.
    pub fn default_for(kind: ScenarioKind) -> Self {
        let raw = RawConfig {
            kind,
            seed: 0,
            duration_s: None,
            dt_s: None,
            output_dir: None,
            output_stride: None,
            absorption: AbsorptionParams::default(),
            fin: FinSchedule::default(),
            swim: SwimParams::default(),
            uptake: UptakeParams::default(),
            stiffness: StiffnessParams::default(),
        };
        raw.resolve()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration_s > 0.0) || !self.duration_s.is_finite() {
            return Err(SimError::invalid("duration_s", "must be > 0 and finite"));
        }
        if !(self.dt_s > 0.0) || !self.dt_s.is_finite() {
            return Err(SimError::invalid("dt_s", "must be > 0 and finite"));
        }
        if self.dt_s > self.duration_s {
            return Err(SimError::invalid("dt_s", "must not exceed duration_s"));
        }
        if self.output_stride == 0 {
            return Err(SimError::invalid("output_stride", "must be >= 1"));
        }
        self.absorption.validate()?;
        self.fin.validate()?;
        self.swim.validate()?;
        self.uptake.validate()?;
        self.stiffness.validate()?;
        if self.kind.is_swim() {
            if self.dt_s > MAX_DT {
                return Err(SimError::invalid(
                    "dt_s",
                    format!("swim scenarios integrate with dt <= {MAX_DT} s"),
                ));
            }
            let window_start = self.swim.swim_start_delay_s + self.swim.avg_transient_s;
            if self.duration_s <= window_start {
                return Err(SimError::invalid(
                    "duration_s",
                    format!(
                        "must exceed swim start delay + averaging transient ({window_start} s)"
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Parse and validate a config file, applying defaults.
pub fn parse_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SimError::Config(format!("{}: {e}", path.display())))?;
    parse_config_str(&text).map_err(|e| match e {
        SimError::Config(msg) => SimError::Config(format!("{}: {msg}", path.display())),
        SimError::Invalid { field, reason } => {
            SimError::Config(format!("{}: invalid {field}: {reason}", path.display()))
        }
        other => other,
    })
}

/// Parse and validate a config from a JSON string.
pub fn parse_config_str(text: &str) -> Result<ScenarioConfig> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
    let cfg = raw.resolve();
    cfg.validate().map_err(|e| match e {
        SimError::Invalid { field, reason } => {
            SimError::Config(format!("invalid {field}: {reason}"))
        }
        other => other,
    })?;
    Ok(cfg)
}

/// Ready-made configurations used by tests, examples, and docs.
pub mod presets {
    use super::*;

    /// Full-scale swim run: 900 s float, 60 s of swimming, dt 5 ms.
    pub fn paper_swim_config(kind: ScenarioKind) -> ScenarioConfig {
        assert!(kind.is_swim());
        ScenarioConfig::default_for(kind)
    }

    /// Reduced swim run for quick experiments: 20 s float, 60 s of
    /// swimming, dt 10 ms. The absorption rate is recalibrated so a
    /// meaningful growth fraction develops within the short float.
    pub fn fast_swim_config(kind: ScenarioKind, seed: u64) -> ScenarioConfig {
        assert!(kind.is_swim());
        let mut cfg = ScenarioConfig::default_for(kind);
        cfg.seed = seed;
        cfg.dt_s = 0.01;
        cfg.swim.swim_start_delay_s = 20.0;
        cfg.duration_s = 80.0;
        cfg.absorption.rate_per_s =
            crate::absorption::calibrate_rate(325.0, 20.0, cfg.absorption.capacity_g)
                .expect("fast preset rate");
        cfg
    }

    /// Soil uptake run with the fitted intake distribution.
    pub fn soil_config(seed: u64) -> ScenarioConfig {
        let mut cfg = ScenarioConfig::default_for(ScenarioKind::SoilUptake);
        cfg.seed = seed;
        cfg
    }

    /// Stiffness sweep over the four fill conditions.
    pub fn stiffness_config(seed: u64) -> ScenarioConfig {
        let mut cfg = ScenarioConfig::default_for(ScenarioKind::StiffnessSweep);
        cfg.seed = seed;
        cfg
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    pub use super::presets::{fast_swim_config, paper_swim_config};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_swim_config_fills_defaults() {
        let cfg = parse_config_str(r#"{"kind": "swim_with_material", "seed": 1}"#).unwrap();
        assert_eq!(cfg.dt_s, 0.005);
        assert_eq!(cfg.duration_s, 960.0);
        assert_eq!(cfg.output_stride, 1);
        assert_eq!(cfg.swim.body_mass_dry_g, 318.0);
    }

    #[test]
    fn unknown_key_is_rejected_by_name() {
        let err = parse_config_str(r#"{"kind": "swim_with_material", "seed": 1, "finz": {}}"#)
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("finz"), "message should name the key: {msg}");
    }

    #[test]
    fn unknown_nested_key_is_rejected() {
        let err = parse_config_str(
            r#"{"kind": "soil_uptake", "seed": 1, "uptake": {"jam_probability": 0.1}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("jam_probability"));
    }

    #[test]
    fn out_of_range_jam_prob_is_rejected() {
        let err = parse_config_str(
            r#"{"kind": "soil_uptake", "seed": 1, "uptake": {"jam_prob": 1.5}}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("jam_prob"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn swim_dt_cap_enforced() {
        let err = parse_config_str(
            r#"{"kind": "swim_with_material", "seed": 1, "dt_s": 0.02}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("dt"));
    }

    #[test]
    fn partial_blocks_merge_with_defaults() {
        let cfg = parse_config_str(
            r#"{"kind": "soil_uptake", "seed": 3, "uptake": {"jam_prob": 0.0}}"#,
        )
        .unwrap();
        assert_eq!(cfg.uptake.jam_prob, 0.0);
        assert_eq!(cfg.uptake.winch_per_cycle_m, 0.07);
    }

    #[test]
    fn missing_file_is_a_config_error() {
        let err = parse_config(Path::new("/nonexistent/cfg.json")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn defaults_validate_for_all_kinds() {
        for kind in [
            ScenarioKind::SwimWithMaterial,
            ScenarioKind::SwimWithoutMaterial,
            ScenarioKind::SoilUptake,
            ScenarioKind::StiffnessSweep,
        ] {
            ScenarioConfig::default_for(kind).validate().unwrap();
        }
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = ScenarioConfig::default_for(ScenarioKind::SoilUptake);
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ScenarioConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }
}
