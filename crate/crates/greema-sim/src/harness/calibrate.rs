//! Calibration driver: fits the absorption rate, the swim thrust/drag
//! pair, and the soil-intake distribution from a targets file, then
//! writes the fitted parameters with residuals. Repeat runs produce an
//! identical parameter file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::absorption::{absorbed_mass, calibrate_rate, AbsorptionParams};
use crate::config::{ScenarioConfig, ScenarioKind};
use crate::error::{Result, SimError};
use crate::soil::{calibrate_uptake, run_experiment, UptakeParams};
use crate::swim::{calibrate_swim, SwimTargets};

use super::export::json_string;
use super::{sha256_hex, OutputWriter, RunManifest};

/// Number of seeded runs used to report the realized intake mean.
const UPTAKE_CHECK_SEEDS: u64 = 100;

/// Calibration targets; sections are independent and optional.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetsFile {
    #[serde(default)]
    pub absorption: Option<AbsorptionTarget>,
    #[serde(default)]
    pub swim: Option<SwimTargetSection>,
    #[serde(default)]
    pub uptake: Option<UptakeTargetSection>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsorptionTarget {
    pub target_mass_g: f64,
    pub target_time_s: f64,
    pub capacity_g: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwimTargetSection {
    pub v_with_m_s: f64,
    pub v_without_m_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UptakeTargetSection {
    /// (total grams, cycle count) per recorded experiment.
    pub experiments: Vec<(f64, u32)>,
}

/// Fitted parameters and residuals, one section per calibrated module.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub absorption: Option<AbsorptionFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub swim: Option<SwimFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uptake: Option<UptakeFit>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AbsorptionFit {
    pub rate_per_s: f64,
    pub capacity_g: f64,
    pub target_mass_g: f64,
    pub target_time_s: f64,
    /// |modelled mass at target time - target mass| \[g\].
    pub residual_g: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SwimFit {
    pub thrust_scale: f64,
    pub body_drag_coeff_area_m2: f64,
    pub v_with_m_s: f64,
    pub v_without_m_s: f64,
    pub residual_with_rel: f64,
    pub residual_without_rel: f64,
    pub speed_ratio: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct UptakeFit {
    pub grab_mean_g: f64,
    pub grab_sd_g: f64,
    pub jam_prob: f64,
    /// Target pooled grams per cycle from the experiment table.
    pub pooled_mean_target_g: f64,
    /// Realized pooled mean over seeded simulation runs.
    pub realized_pooled_mean_g: f64,
    pub residual_rel: f64,
}

pub fn parse_targets(path: &Path) -> Result<TargetsFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SimError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| SimError::Config(format!("{}: {e}", path.display())))
}

/// Run every calibration named in the targets file.
pub fn run_calibrations(targets: &TargetsFile) -> Result<CalibrationResult> {
    if targets.absorption.is_none() && targets.swim.is_none() && targets.uptake.is_none() {
        return Err(SimError::Config("targets file names no calibrations".into()));
    }

    let absorption_fit = match &targets.absorption {
        Some(t) => {
            let rate = calibrate_rate(t.target_mass_g, t.target_time_s, t.capacity_g)?;
            let p = AbsorptionParams {
                capacity_g: t.capacity_g,
                rate_per_s: rate,
                ..AbsorptionParams::default()
            };
            let residual = (absorbed_mass(t.target_time_s, &p)? - t.target_mass_g).abs();
            Some(AbsorptionFit {
                rate_per_s: rate,
                capacity_g: t.capacity_g,
                target_mass_g: t.target_mass_g,
                target_time_s: t.target_time_s,
                residual_g: residual,
            })
        }
        None => None,
    };

    let swim_fit = match &targets.swim {
        Some(t) => {
            let mut cfg = ScenarioConfig::default_for(ScenarioKind::SwimWithMaterial);
            if let Some(fit) = &absorption_fit {
                cfg.absorption.capacity_g = fit.capacity_g;
                cfg.absorption.rate_per_s = fit.rate_per_s;
            }
            let fit = calibrate_swim(
                &SwimTargets {
                    v_with_m_s: t.v_with_m_s,
                    v_without_m_s: t.v_without_m_s,
                },
                &cfg,
            )?;
            Some(SwimFit {
                thrust_scale: fit.params.thrust_scale,
                body_drag_coeff_area_m2: fit.params.body_drag_coeff_area_m2,
                v_with_m_s: fit.v_with_m_s,
                v_without_m_s: fit.v_without_m_s,
                residual_with_rel: fit.residual_with,
                residual_without_rel: fit.residual_without,
                speed_ratio: fit.v_with_m_s / fit.v_without_m_s,
            })
        }
        None => None,
    };

    let uptake_fit = match &targets.uptake {
        Some(t) => {
            let fitted = calibrate_uptake(&t.experiments, &UptakeParams::default())?;
            let pooled_total: f64 = t.experiments.iter().map(|&(g, _)| g).sum();
            let pooled_cycles: u32 = t.experiments.iter().map(|&(_, c)| c).sum();
            let target = pooled_total / pooled_cycles as f64;

            let mut cfg = ScenarioConfig::default_for(ScenarioKind::SoilUptake);
            cfg.uptake = fitted;
            let mut sim_total = 0.0;
            let mut sim_cycles = 0u64;
            for seed in 0..UPTAKE_CHECK_SEEDS {
                cfg.seed = seed;
                let r = run_experiment(&cfg)?;
                sim_total += r.total_g;
                sim_cycles += u64::from(r.cycles);
            }
            let realized = sim_total / sim_cycles as f64;
            Some(UptakeFit {
                grab_mean_g: fitted.grab_mean_g,
                grab_sd_g: fitted.grab_sd_g,
                jam_prob: fitted.jam_prob,
                pooled_mean_target_g: target,
                realized_pooled_mean_g: realized,
                residual_rel: (realized - target) / target,
            })
        }
        None => None,
    };

    Ok(CalibrationResult {
        absorption: absorption_fit,
        swim: swim_fit,
        uptake: uptake_fit,
    })
}

/// Calibrate from a targets file and write `params.json` plus a manifest.
pub fn calibrate_to_dir(targets_path: &Path, out_dir: &Path) -> Result<RunManifest> {
    let targets = parse_targets(targets_path)?;
    let result = run_calibrations(&targets)?;
    let mut writer = OutputWriter::new(out_dir)?;
    writer.write("params.json", "params-json", json_string(&result)?.as_bytes())?;
    let digest = sha256_hex(json_string(&targets)?.as_bytes());
    writer.finish(digest, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_targets() -> TargetsFile {
        TargetsFile {
            absorption: Some(AbsorptionTarget {
                target_mass_g: 325.0,
                target_time_s: 900.0,
                capacity_g: 400.0,
            }),
            swim: None,
            uptake: Some(UptakeTargetSection {
                experiments: crate::soil::REFERENCE_EXPERIMENTS.to_vec(),
            }),
        }
    }

    #[test]
    fn absorption_and_uptake_fits_meet_contracts() {
        let result = run_calibrations(&reference_targets()).unwrap();
        let absorption = result.absorption.unwrap();
        assert!(absorption.residual_g < 1e-6);
        let uptake = result.uptake.unwrap();
        assert!(
            uptake.residual_rel.abs() < 0.05,
            "realized {} vs target {}",
            uptake.realized_pooled_mean_g,
            uptake.pooled_mean_target_g
        );
    }

    #[test]
    fn full_targets_file_fits_all_three_modules() {
        let mut targets = reference_targets();
        targets.swim = Some(SwimTargetSection {
            v_with_m_s: 0.158,
            v_without_m_s: 0.101,
        });
        let result = run_calibrations(&targets).unwrap();
        assert!(result.absorption.unwrap().residual_g < 1e-6);
        let swim = result.swim.unwrap();
        assert!(swim.residual_with_rel.abs() < 0.01);
        assert!(swim.residual_without_rel.abs() < 0.01);
        assert!((1.45..=1.65).contains(&swim.speed_ratio));
        assert!(result.uptake.unwrap().residual_rel.abs() < 0.05);
    }

    #[test]
    fn infeasible_absorption_target_names_the_module() {
        let targets = TargetsFile {
            absorption: Some(AbsorptionTarget {
                target_mass_g: 400.0,
                target_time_s: 900.0,
                capacity_g: 400.0,
            }),
            swim: None,
            uptake: None,
        };
        let err = run_calibrations(&targets).unwrap_err();
        assert_eq!(err.exit_code(), 4);
        assert!(err.to_string().contains("absorption"));
    }

    #[test]
    fn repeat_calibration_writes_identical_file() {
        let dir = tempfile::tempdir().unwrap();
        let targets_path = dir.path().join("targets.json");
        std::fs::write(&targets_path, json_string(&reference_targets()).unwrap()).unwrap();

        let out_a = dir.path().join("a");
        let out_b = dir.path().join("b");
        calibrate_to_dir(&targets_path, &out_a).unwrap();
        calibrate_to_dir(&targets_path, &out_b).unwrap();
        assert_eq!(
            std::fs::read(out_a.join("params.json")).unwrap(),
            std::fs::read(out_b.join("params.json")).unwrap()
        );
    }

    #[test]
    fn empty_targets_file_is_a_config_error() {
        let targets = TargetsFile {
            absorption: None,
            swim: None,
            uptake: None,
        };
        let err = run_calibrations(&targets).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
