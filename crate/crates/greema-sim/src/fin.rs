//! Feed-forward fin controller.
//!
//! Both fins follow the same periodic command: a fast power sweep from
//! `theta_start` down to `theta_end`, a hold, and a slow recovery sweep
//! back up. The command is a pure function of time; servo tracking lag
//! is not modeled. Phase intervals are half-open so boundary instants
//! resolve deterministically to the phase on the right.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// The piecewise-linear fin command. Angles in degrees, rates in deg/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FinSchedule {
    /// Stroke start angle (recovery target) \[deg\].
    pub theta_start_deg: f64,
    /// Stroke end angle (power target) \[deg\].
    pub theta_end_deg: f64,
    /// Power sweep rate \[deg/s\].
    pub power_rate_deg_s: f64,
    /// Dwell at the stroke end \[s\].
    pub hold_time_s: f64,
    /// Recovery sweep rate \[deg/s\].
    pub recovery_rate_deg_s: f64,
    /// Per-fin command offsets \[deg\]; zero under the standard controller.
    pub offset_right_deg: f64,
    pub offset_left_deg: f64,
}

impl Default for FinSchedule {
    fn default() -> Self {
        FinSchedule {
            theta_start_deg: 40.0,
            theta_end_deg: -60.0,
            power_rate_deg_s: 300.0,
            hold_time_s: 0.5,
            recovery_rate_deg_s: 100.0,
            offset_right_deg: 0.0,
            offset_left_deg: 0.0,
        }
    }
}

impl FinSchedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta_start_deg > self.theta_end_deg) {
            return Err(SimError::invalid(
                "fin.theta_start_deg",
                format!(
                    "stroke must sweep downward: start {} <= end {}",
                    self.theta_start_deg, self.theta_end_deg
                ),
            ));
        }
        if !(self.power_rate_deg_s > 0.0) || !(self.recovery_rate_deg_s > 0.0) {
            return Err(SimError::invalid("fin.rates", "sweep rates must be > 0"));
        }
        if !(self.hold_time_s >= 0.0) {
            return Err(SimError::invalid("fin.hold_time_s", "must be >= 0"));
        }
        let hi = self.theta_start_deg + self.offset_right_deg.max(self.offset_left_deg);
        let lo = self.theta_end_deg + self.offset_right_deg.min(self.offset_left_deg);
        if hi > 90.0 || lo < -90.0 {
            return Err(SimError::invalid(
                "fin.offsets",
                "offset commands must stay within [-90, 90] deg",
            ));
        }
        Ok(())
    }

    /// Stroke sweep magnitude \[deg\].
    fn sweep(&self) -> f64 {
        self.theta_start_deg - self.theta_end_deg
    }

    /// Duration of the power phase \[s\].
    pub fn power_duration(&self) -> f64 {
        self.sweep() / self.power_rate_deg_s
    }

    /// Duration of the recovery phase \[s\].
    pub fn recovery_duration(&self) -> f64 {
        self.sweep() / self.recovery_rate_deg_s
    }
}

/// Which part of the stroke the controller is in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FinPhase {
    Power,
    Hold,
    Recovery,
}

/// Commanded angles of both fins \[deg\].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinState {
    pub theta_r_deg: f64,
    pub theta_l_deg: f64,
}

/// Full cycle period: power sweep + hold + recovery sweep.
///
/// Degenerate schedules with `theta_start = theta_end` collapse to the
/// hold time alone.
pub fn cycle_period(sched: &FinSchedule) -> f64 {
    let sweep = sched.sweep().max(0.0);
    sweep / sched.power_rate_deg_s + sched.hold_time_s + sweep / sched.recovery_rate_deg_s
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(SimError::invalid("t", format!("must be >= 0 and finite, got {t}")));
    }
    Ok(())
}

/// Position within the cycle, in [0, period).
fn cycle_time(t: f64, sched: &FinSchedule) -> Result<f64> {
    check_time(t)?;
    let period = cycle_period(sched);
    if !(period > 0.0) {
        return Err(SimError::invalid("fin", "cycle period must be > 0"));
    }
    let tau = t % period;
    // t an exact multiple of period can leave tau == period after rounding.
    Ok(if tau >= period { 0.0 } else { tau })
}

/// Phase at time `t`; half-open intervals, periodic.
pub fn phase_at(t: f64, sched: &FinSchedule) -> Result<FinPhase> {
    let tau = cycle_time(t, sched)?;
    let power_end = sched.power_duration();
    let hold_end = power_end + sched.hold_time_s;
    Ok(if tau < power_end {
        FinPhase::Power
    } else if tau < hold_end {
        FinPhase::Hold
    } else {
        FinPhase::Recovery
    })
}

/// Commanded fin angle at time `t` \[deg\]; piecewise linear, continuous,
/// and confined to [theta_end, theta_start].
pub fn command_at(t: f64, sched: &FinSchedule) -> Result<f64> {
    let tau = cycle_time(t, sched)?;
    let power_end = sched.power_duration();
    let hold_end = power_end + sched.hold_time_s;
    let theta = if tau < power_end {
        sched.theta_start_deg - sched.power_rate_deg_s * tau
    } else if tau < hold_end {
        sched.theta_end_deg
    } else {
        sched.theta_end_deg + sched.recovery_rate_deg_s * (tau - hold_end)
    };
    Ok(theta.clamp(sched.theta_end_deg, sched.theta_start_deg))
}

/// Commanded angular rate at time `t` \[deg/s\]: negative during power,
/// zero during hold, positive during recovery. The sign convention is
/// that decreasing theta is the power direction.
pub fn angular_rate_at(t: f64, sched: &FinSchedule) -> Result<f64> {
    Ok(match phase_at(t, sched)? {
        FinPhase::Power => -sched.power_rate_deg_s,
        FinPhase::Hold => 0.0,
        FinPhase::Recovery => sched.recovery_rate_deg_s,
    })
}

/// Both fin commands at time `t`; identical except for configured offsets.
pub fn fin_state_at(t: f64, sched: &FinSchedule) -> Result<FinState> {
    let theta = command_at(t, sched)?;
    Ok(FinState {
        theta_r_deg: theta + sched.offset_right_deg,
        theta_l_deg: theta + sched.offset_left_deg,
    })
}
