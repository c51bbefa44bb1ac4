//! Water uptake by the superabsorbent polymer sealed in the swimmer's body.
//!
//! Absorbed mass follows a first-order saturation law
//! `m(t) = C_eff * (1 - exp(-k * t))`: the simplest monotone-saturating
//! model consistent with a bag-limited effective capacity well below the
//! polymer's intrinsic uptake. Stepping uses the exact exponential update,
//! so results carry no step-size sensitivity.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Parameters of the saturation law.
///
/// `capacity_g` is the bag-limited effective capacity, not the polymer's
/// intrinsic one; the intrinsic figures are kept only as an upper-bound
/// sanity check (water density 1 g/ml).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AbsorptionParams {
    /// Dry polymer mass sealed in the bag \[g\].
    pub sap_mass_g: f64,
    /// Effective water capacity C_eff \[g\].
    pub capacity_g: f64,
    /// First-order rate constant k \[1/s\].
    pub rate_per_s: f64,
    /// Intrinsic uptake per gram of polymer \[ml/g\].
    pub intrinsic_capacity_ml_per_g: f64,
    /// Time for the intrinsic uptake \[s\].
    pub intrinsic_time_s: f64,
}

impl Default for AbsorptionParams {
    fn default() -> Self {
        AbsorptionParams {
            sap_mass_g: 15.0,
            capacity_g: 400.0,
            // Rate that reaches 325 g at 900 s with a 400 g capacity.
            rate_per_s: (400.0f64 / 75.0).ln() / 900.0,
            intrinsic_capacity_ml_per_g: 300.0,
            intrinsic_time_s: 80.0,
        }
    }
}

impl AbsorptionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sap_mass_g > 0.0) {
            return Err(SimError::invalid("absorption.sap_mass_g", "must be > 0"));
        }
        if !(self.capacity_g > 0.0) {
            return Err(SimError::invalid("absorption.capacity_g", "must be > 0"));
        }
        if !(self.rate_per_s > 0.0) {
            return Err(SimError::invalid("absorption.rate_per_s", "must be > 0"));
        }
        if !(self.intrinsic_capacity_ml_per_g > 0.0) || !(self.intrinsic_time_s > 0.0) {
            return Err(SimError::invalid(
                "absorption.intrinsic",
                "intrinsic capacity and time must be > 0",
            ));
        }
        let intrinsic_limit = self.sap_mass_g * self.intrinsic_capacity_ml_per_g;
        if self.capacity_g > intrinsic_limit {
            return Err(SimError::invalid(
                "absorption.capacity_g",
                format!(
                    "effective capacity {} g exceeds intrinsic limit {} g",
                    self.capacity_g, intrinsic_limit
                ),
            ));
        }
        Ok(())
    }
}

/// Absorbed water mass and elapsed time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsorptionState {
    pub t: f64,
    pub water_mass_g: f64,
}

impl AbsorptionState {
    pub fn initial() -> Self {
        AbsorptionState {
            t: 0.0,
            water_mass_g: 0.0,
        }
    }
}

/// Fraction of capacity the model saturates at; keeps absorbed mass
/// strictly below capacity (and the growth fraction strictly below 1)
/// even where `1 - exp(-k t)` rounds to 1 in f64.
const SATURATION_CAP: f64 = 1.0 - 1e-12;

/// Closed-form absorbed mass at time `t` \[g\].
pub fn absorbed_mass(t: f64, p: &AbsorptionParams) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(SimError::invalid("t", format!("must be >= 0 and finite, got {t}")));
    }
    // -(exp(-k t) - 1) = 1 - exp(-k t), accurate for small k t.
    let filled = -(-p.rate_per_s * t).exp_m1();
    Ok(p.capacity_g * filled.min(SATURATION_CAP))
}

/// Solve for the rate k such that `absorbed_mass(target_time) = target_mass`.
///
/// Fails when the target sits at or above the capacity asymptote, which
/// signals a misconfigured bag capacity rather than a solvable rate.
pub fn calibrate_rate(target_mass_g: f64, target_time_s: f64, capacity_g: f64) -> Result<f64> {
    if !(target_mass_g > 0.0) {
        return Err(SimError::Calibration {
            module: "absorption",
            reason: format!("target mass must be > 0, got {target_mass_g}"),
        });
    }
    if !(target_time_s > 0.0) {
        return Err(SimError::Calibration {
            module: "absorption",
            reason: format!("target time must be > 0, got {target_time_s}"),
        });
    }
    if target_mass_g >= capacity_g {
        return Err(SimError::Calibration {
            module: "absorption",
            reason: format!(
                "target mass {target_mass_g} g unreachable: capacity asymptote is {capacity_g} g"
            ),
        });
    }
    Ok((capacity_g / (capacity_g - target_mass_g)).ln() / target_time_s)
}

/// Absorbed water normalized by effective capacity, in [0, 1).
pub fn growth_fraction(state: &AbsorptionState, p: &AbsorptionParams) -> f64 {
    state.water_mass_g / p.capacity_g
}

/// Advance the state by `dt` with the exact exponential update.
///
/// Composing steps equals one big step: `m' = C - (C - m) * exp(-k dt)`.
pub fn step(state: &AbsorptionState, dt: f64, p: &AbsorptionParams) -> Result<AbsorptionState> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(SimError::invalid("dt", format!("must be > 0 and finite, got {dt}")));
    }
    let decay = (-p.rate_per_s * dt).exp();
    let next = p.capacity_g - (p.capacity_g - state.water_mass_g) * decay;
    Ok(AbsorptionState {
        t: state.t + dt,
        water_mass_g: next.min(p.capacity_g * SATURATION_CAP),
    })
}
