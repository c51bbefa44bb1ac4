//! Surge dynamics of the fin swimmer.
//!
//! The chain is: absorbed water raises the growth fraction; growth sets
//! the effective fin angle (how well the body supports the fins against
//! drooping); each fin produces quadratic blade drag thrust proportional
//! to `sin(psi_eff)` and the squared sweep speed; a lumped quadratic hull
//! drag closes the force balance. Velocity integrates semi-implicitly
//! (drag treated implicitly), so the constant-thrust fixed point
//! `v = sqrt(T / (0.5 rho CdA))` is reached without step-size blowup.
//!
//! The swimmer floats passively until `swim_start_delay_s`, then runs the
//! feed-forward fin schedule. While it floats the velocity is exactly
//! zero, so that span is fast-forwarded with the closed-form absorption
//! law instead of stepped.

use serde::{Deserialize, Serialize};

use crate::absorption::{self, AbsorptionParams, AbsorptionState};
use crate::config::{ScenarioConfig, ScenarioKind};
use crate::error::{Result, SimError};
use crate::fin::{self, FinSchedule};
use crate::series::{time_average, TimeSeries};
use crate::units::Unit;

/// Largest integration step the surge integrator accepts \[s\].
pub const MAX_DT: f64 = 0.01;

/// Swimmer parameters. Masses in grams, lengths in meters, angles in
/// degrees at the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SwimParams {
    /// Dry robot mass including the sealed polymer \[g\].
    pub body_mass_dry_g: f64,
    /// Effective blade area of one fin \[m^2\].
    pub fin_area_m2: f64,
    /// Effective radius from servo axis to the fin pressure center \[m\].
    pub fin_lever_m: f64,
    /// Water density \[kg/m^3\].
    pub water_density_kg_m3: f64,
    /// Lumped hull drag Cd*A \[m^2\]; calibration target.
    pub body_drag_coeff_area_m2: f64,
    /// Dimensionless blade drag coefficient; calibration target.
    pub thrust_scale: f64,
    /// Effective fin angle with no absorbed water \[deg\].
    pub psi_min_deg: f64,
    /// Effective fin angle at the reference growth \[deg\].
    pub psi_max_deg: f64,
    /// Growth fraction at which `psi_max_deg` is reached.
    pub growth_ref: f64,
    /// Shape exponent of the droop-recovery curve (>= 0).
    pub droop_exponent: f64,
    /// Float time before the fin schedule starts \[s\].
    pub swim_start_delay_s: f64,
    /// Start-up transient discarded before averaging \[s\].
    pub avg_transient_s: f64,
    /// Side-view fin-angle oscillation amplitude at zero growth \[deg\].
    pub fin_wobble_amp_deg: f64,
    /// Fractional wobble reduction at the reference growth.
    pub fin_wobble_shrink: f64,
}

impl Default for SwimParams {
    fn default() -> Self {
        // Drag area and thrust scale carry the fitted values that
        // reproduce the measured 0.158 / 0.101 m/s pair; see
        // swim::calibrate_swim and the acceptance suite.
        SwimParams {
            body_mass_dry_g: 318.0,
            fin_area_m2: 0.004,
            fin_lever_m: 0.08,
            water_density_kg_m3: 1000.0,
            body_drag_coeff_area_m2: 2.578_564_945_647_584e-3,
            thrust_scale: 4.163_840_320_425_357e-1,
            psi_min_deg: 24.087,
            psi_max_deg: 73.607,
            growth_ref: 0.8125,
            droop_exponent: 1.0,
            swim_start_delay_s: 900.0,
            avg_transient_s: 10.0,
            fin_wobble_amp_deg: 20.0,
            fin_wobble_shrink: 0.45,
        }
    }
}

impl SwimParams {
    pub fn validate(&self) -> Result<()> {
        let positive: [(&'static str, f64); 6] = [
            ("swim.body_mass_dry_g", self.body_mass_dry_g),
            ("swim.fin_area_m2", self.fin_area_m2),
            ("swim.fin_lever_m", self.fin_lever_m),
            ("swim.water_density_kg_m3", self.water_density_kg_m3),
            ("swim.body_drag_coeff_area_m2", self.body_drag_coeff_area_m2),
            ("swim.thrust_scale", self.thrust_scale),
        ];
        for (field, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(SimError::invalid(field, format!("must be > 0, got {value}")));
            }
        }
        if !(self.psi_min_deg > 0.0 && self.psi_min_deg < 90.0) {
            return Err(SimError::invalid("swim.psi_min_deg", "must lie in (0, 90)"));
        }
        if !(self.psi_max_deg > self.psi_min_deg && self.psi_max_deg <= 90.0) {
            return Err(SimError::invalid(
                "swim.psi_max_deg",
                "must lie in (psi_min, 90]",
            ));
        }
        if !(self.growth_ref > 0.0 && self.growth_ref < 1.0) {
            return Err(SimError::invalid("swim.growth_ref", "must lie in (0, 1)"));
        }
        if !(self.droop_exponent >= 0.0) {
            return Err(SimError::invalid("swim.droop_exponent", "must be >= 0"));
        }
        if !(self.swim_start_delay_s >= 0.0) {
            return Err(SimError::invalid("swim.swim_start_delay_s", "must be >= 0"));
        }
        if !(self.avg_transient_s >= 0.0) {
            return Err(SimError::invalid("swim.avg_transient_s", "must be >= 0"));
        }
        if !(self.fin_wobble_amp_deg >= 0.0) {
            return Err(SimError::invalid("swim.fin_wobble_amp_deg", "must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.fin_wobble_shrink) {
            return Err(SimError::invalid("swim.fin_wobble_shrink", "must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Instantaneous surge state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwimState {
    pub t: f64,
    pub x_m: f64,
    pub v_m_s: f64,
    /// Growth fraction in [0, 1).
    pub growth: f64,
    /// Current fin command \[deg\].
    pub theta_deg: f64,
}

/// Series and averages produced by one swim run.
#[derive(Debug, Clone)]
pub struct SwimResult {
    /// Body position \[m\].
    pub trajectory: TimeSeries,
    /// Signed surge velocity \[m/s\]. Positive in calibrated regimes; its
    /// window mean is the net progress rate, the quantity a tracked
    /// trajectory yields.
    pub velocity: TimeSeries,
    /// Motion-relative fin angle \[deg\].
    pub fin_angle: TimeSeries,
    /// Growth fraction over time.
    pub growth: TimeSeries,
    /// Mean surge velocity over the averaging window \[m/s\].
    pub avg_speed_m_s: f64,
    /// Mean motion-relative fin angle over the window \[deg\].
    pub avg_fin_angle_deg: f64,
    /// Start of the averaging window \[s\].
    pub window_start_s: f64,
    /// Total robot mass at the end of the run \[g\].
    pub final_mass_g: f64,
}

/// Effective fin angle for a given growth fraction \[deg\].
///
/// Rises from `psi_min_deg` at zero growth to `psi_max_deg` at the
/// reference growth and clamps there; monotone non-decreasing for any
/// `droop_exponent >= 0`. Zero growth maps to `psi_min_deg` even when
/// the exponent is zero.
pub fn effective_fin_angle(growth: f64, p: &SwimParams) -> Result<f64> {
    if !(0.0..1.0).contains(&growth) {
        return Err(SimError::invalid(
            "growth",
            format!("must lie in [0, 1), got {growth}"),
        ));
    }
    if growth == 0.0 {
        return Ok(p.psi_min_deg);
    }
    let x = (growth / p.growth_ref).min(1.0);
    Ok(p.psi_min_deg + (p.psi_max_deg - p.psi_min_deg) * x.powf(p.droop_exponent))
}

/// Surge-direction thrust of one fin \[N\].
///
/// Quadratic blade drag on the sweeping fin: magnitude scales with the
/// squared tip speed and `sin(psi_eff)`; direction follows the stroke
/// (positive while sweeping toward the stroke end, negative on recovery,
/// zero while holding).
pub fn fin_thrust(theta_rate_deg_s: f64, psi_eff_deg: f64, p: &SwimParams) -> f64 {
    if theta_rate_deg_s == 0.0 {
        return 0.0;
    }
    let direction = if theta_rate_deg_s < 0.0 { 1.0 } else { -1.0 };
    let omega = theta_rate_deg_s.abs() * std::f64::consts::PI / 180.0;
    let tip_speed = p.fin_lever_m * omega;
    let psi = psi_eff_deg * std::f64::consts::PI / 180.0;
    0.5 * p.water_density_kg_m3
        * p.thrust_scale
        * p.fin_area_m2
        * tip_speed
        * tip_speed
        * psi.sin()
        * direction
}

/// Quadratic hull drag \[N\]; opposes motion, zero at rest.
pub fn body_drag(v_m_s: f64, p: &SwimParams) -> f64 {
    -0.5 * p.water_density_kg_m3 * p.body_drag_coeff_area_m2 * v_m_s * v_m_s.abs()
}

/// One implicit-drag velocity update: solves
/// `m (v' - v) / dt = thrust - d v' |v'|` with `d = 0.5 rho CdA`.
pub(crate) fn integrate_velocity(v: f64, mass_kg: f64, thrust_n: f64, drag_d: f64, dt: f64) -> f64 {
    let momentum = mass_kg * v + thrust_n * dt;
    let a = drag_d * dt;
    if a <= 0.0 {
        return momentum / mass_kg;
    }
    if momentum >= 0.0 {
        (-mass_kg + (mass_kg * mass_kg + 4.0 * a * momentum).sqrt()) / (2.0 * a)
    } else {
        (mass_kg - (mass_kg * mass_kg - 4.0 * a * momentum).sqrt()) / (2.0 * a)
    }
}

fn check_dt(dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(SimError::invalid(
            "dt",
            format!("integration step must lie in (0, {MAX_DT}], got {dt}"),
        ));
    }
    Ok(())
}

fn step_inner(
    s: &SwimState,
    dt: f64,
    p: &SwimParams,
    sched: &FinSchedule,
    a: &AbsorptionParams,
    evolve_growth: bool,
) -> Result<SwimState> {
    check_dt(dt)?;
    let active = s.t >= p.swim_start_delay_s;
    let (theta_rate, psi_eff) = if active {
        let local = s.t - p.swim_start_delay_s;
        (
            fin::angular_rate_at(local, sched)?,
            effective_fin_angle(s.growth, p)?,
        )
    } else {
        (0.0, effective_fin_angle(s.growth, p)?)
    };

    let thrust = 2.0 * fin_thrust(theta_rate, psi_eff, p);
    let water_mass_g = s.growth * a.capacity_g;
    let mass_kg = (p.body_mass_dry_g + water_mass_g) / 1000.0;
    let drag_d = 0.5 * p.water_density_kg_m3 * p.body_drag_coeff_area_m2;

    let v_next = integrate_velocity(s.v_m_s, mass_kg, thrust, drag_d, dt);
    if !v_next.is_finite() {
        return Err(SimError::Engine {
            scenario: "swim".into(),
            reason: format!("velocity diverged at t = {}", s.t),
        });
    }

    let t_next = s.t + dt;
    let growth_next = if evolve_growth {
        let state = AbsorptionState {
            t: s.t,
            water_mass_g,
        };
        absorption::growth_fraction(&absorption::step(&state, dt, a)?, a)
    } else {
        s.growth
    };
    let theta_next = if t_next >= p.swim_start_delay_s {
        fin::command_at(t_next - p.swim_start_delay_s, sched)?
    } else {
        sched.theta_start_deg
    };

    Ok(SwimState {
        t: t_next,
        x_m: s.x_m + dt * v_next,
        v_m_s: v_next,
        growth: growth_next,
        theta_deg: theta_next,
    })
}

/// Advance the surge state by `dt`, evolving growth from the absorption
/// law. The fin schedule is active only once `t` has passed the start
/// delay; before that the fins are parked and the velocity stays zero.
pub fn step_dynamics(
    s: &SwimState,
    dt: f64,
    p: &SwimParams,
    sched: &FinSchedule,
    a: &AbsorptionParams,
) -> Result<SwimState> {
    step_inner(s, dt, p, sched, a, true)
}

/// Side-view fin-angle sample: the effective angle plus a stroke-locked
/// zero-mean oscillation whose amplitude shrinks as the body grows.
fn fin_angle_sample(t: f64, growth: f64, p: &SwimParams, sched: &FinSchedule) -> Result<f64> {
    let psi = effective_fin_angle(growth, p)?;
    if t < p.swim_start_delay_s {
        return Ok(psi);
    }
    let period = fin::cycle_period(sched);
    let amp = p.fin_wobble_amp_deg
        * (1.0 - p.fin_wobble_shrink * (growth / p.growth_ref).min(1.0));
    let phase = 2.0 * std::f64::consts::PI * ((t - p.swim_start_delay_s) % period) / period;
    Ok((psi + amp * phase.sin()).clamp(0.0, 90.0))
}

/// Run a full swim scenario and return series plus window averages.
///
/// `swim_without_material` pins the growth fraction at zero for the whole
/// run; `swim_with_material` evolves it under the absorption law.
pub fn run_swim(cfg: &ScenarioConfig) -> Result<SwimResult> {
    let with_material = match cfg.kind {
        ScenarioKind::SwimWithMaterial => true,
        ScenarioKind::SwimWithoutMaterial => false,
        other => {
            return Err(SimError::invalid(
                "kind",
                format!("run_swim requires a swim kind, got {other:?}"),
            ))
        }
    };
    cfg.validate()?;
    let p = &cfg.swim;
    let sched = &cfg.fin;
    let a = &cfg.absorption;
    let dt = cfg.dt_s;
    check_dt(dt)?;

    let n_samples = (cfg.duration_s / dt + 1e-9).floor() as usize + 1;
    let delay_index = ((p.swim_start_delay_s / dt - 1e-9).ceil().max(0.0) as usize).min(n_samples - 1);

    let growth_at = |t: f64| -> Result<f64> {
        if with_material {
            Ok(absorption::absorbed_mass(t, a)? / a.capacity_g)
        } else {
            Ok(0.0)
        }
    };

    let mut xs = Vec::with_capacity(n_samples);
    let mut vs = Vec::with_capacity(n_samples);
    let mut angles = Vec::with_capacity(n_samples);
    let mut growths = Vec::with_capacity(n_samples);

    // Floating span: velocity is exactly zero, growth follows the closed
    // form, fins are parked.
    for i in 0..delay_index {
        let t = i as f64 * dt;
        let g = growth_at(t)?;
        xs.push(0.0);
        vs.push(0.0);
        angles.push(fin_angle_sample(t, g, p, sched)?);
        growths.push(g);
    }

    // Swimming span: integrate step by step.
    let t0 = delay_index as f64 * dt;
    let mut state = SwimState {
        t: t0,
        x_m: 0.0,
        v_m_s: 0.0,
        growth: growth_at(t0)?,
        theta_deg: sched.theta_start_deg,
    };
    xs.push(state.x_m);
    vs.push(state.v_m_s);
    angles.push(fin_angle_sample(state.t, state.growth, p, sched)?);
    growths.push(state.growth);

    for _ in delay_index + 1..n_samples {
        state = step_inner(&state, dt, p, sched, a, with_material)?;
        xs.push(state.x_m);
        vs.push(state.v_m_s);
        angles.push(fin_angle_sample(state.t, state.growth, p, sched)?);
        growths.push(state.growth);
    }

    let trajectory = TimeSeries::new("x", Unit::Meters, dt, xs)?;
    let velocity = TimeSeries::new("velocity", Unit::MetersPerSecond, dt, vs)?;
    let fin_angle = TimeSeries::new("fin_angle", Unit::Degrees, dt, angles)?;
    let growth_series = TimeSeries::new("growth", Unit::Dimensionless, dt, growths)?;

    let window_start = p.swim_start_delay_s + p.avg_transient_s;
    let window_end = trajectory.last_time();
    if !(window_start < window_end) {
        return Err(SimError::invalid(
            "duration_s",
            format!(
                "averaging window empty: duration must exceed delay + transient = {window_start} s"
            ),
        ));
    }
    let avg_speed = time_average(&velocity, window_start, window_end)?;
    let avg_angle = time_average(&fin_angle, window_start, window_end)?;
    let final_mass_g = p.body_mass_dry_g + growth_series.values.last().unwrap() * a.capacity_g;

    Ok(SwimResult {
        trajectory,
        velocity,
        fin_angle,
        growth: growth_series,
        avg_speed_m_s: avg_speed,
        avg_fin_angle_deg: avg_angle,
        window_start_s: window_start,
        final_mass_g,
    })
}

/// Measured mean-speed targets for the with/without-material pair \[m/s\].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwimTargets {
    pub v_with_m_s: f64,
    pub v_without_m_s: f64,
}

/// Fit report for a swim calibration.
#[derive(Debug, Clone, Copy)]
pub struct SwimCalibration {
    pub params: SwimParams,
    pub v_with_m_s: f64,
    pub v_without_m_s: f64,
    /// Relative residuals against the two targets.
    pub residual_with: f64,
    pub residual_without: f64,
}

fn pair_speeds(cfg: &ScenarioConfig, p: &SwimParams) -> Result<(f64, f64)> {
    let mut with_cfg = cfg.clone();
    with_cfg.kind = ScenarioKind::SwimWithMaterial;
    with_cfg.swim = *p;
    let mut without_cfg = with_cfg.clone();
    without_cfg.kind = ScenarioKind::SwimWithoutMaterial;
    Ok((
        run_swim(&with_cfg)?.avg_speed_m_s,
        run_swim(&without_cfg)?.avg_speed_m_s,
    ))
}

/// Calibrate the two free scalars — hull `Cd*A` and the fin thrust
/// scale — so the simulated pair reproduces both speed targets.
///
/// The search is nested: for a candidate drag area, a secant iteration
/// on the thrust scale pins the with-material speed (mean speed is
/// monotone in thrust), then an outer bracketed bisection on the drag
/// area drives the without-material speed to its target. Bounded
/// iterations; inconsistent targets surface as a calibration error.
pub fn calibrate_swim(targets: &SwimTargets, cfg: &ScenarioConfig) -> Result<SwimCalibration> {
    if !(targets.v_with_m_s > 0.0 && targets.v_without_m_s > 0.0) {
        return Err(SimError::Calibration {
            module: "swim",
            reason: "speed targets must be positive".into(),
        });
    }
    if targets.v_without_m_s >= targets.v_with_m_s {
        return Err(SimError::Calibration {
            module: "swim",
            reason: format!(
                "without-material target {} >= with-material target {}: \
                 the model family is monotone in growth and cannot reproduce this",
                targets.v_without_m_s, targets.v_with_m_s
            ),
        });
    }
    cfg.validate()?;

    let base = cfg.swim;
    let mut thrust_guess = base.thrust_scale;

    // Inner solve: thrust scale that hits the with-material target at a
    // fixed drag area. Secant in log space (mean speed ~ sqrt(thrust)).
    let mut solve_thrust = |drag_area: f64, guess: f64| -> Result<(f64, f64)> {
        let eval = |scale: f64| -> Result<f64> {
            let p = SwimParams {
                thrust_scale: scale,
                body_drag_coeff_area_m2: drag_area,
                ..base
            };
            let mut with_cfg = cfg.clone();
            with_cfg.kind = ScenarioKind::SwimWithMaterial;
            with_cfg.swim = p;
            Ok(run_swim(&with_cfg)?.avg_speed_m_s)
        };
        let target = targets.v_with_m_s;
        let mut u = guess.ln();
        let mut v = eval(u.exp())?;
        // sqrt scaling gives a strong first jump.
        let mut u_prev = u;
        let mut f_prev = v.ln() - target.ln();
        u += -2.0 * f_prev;
        for _ in 0..40 {
            v = eval(u.exp())?;
            let f = v.ln() - target.ln();
            if f.abs() < 1e-5 {
                return Ok((u.exp(), v));
            }
            let denom = f - f_prev;
            let u_next = if denom.abs() > 1e-15 {
                u - f * (u - u_prev) / denom
            } else {
                u - 2.0 * f
            };
            u_prev = u;
            f_prev = f;
            u = u_next;
        }
        Err(SimError::Calibration {
            module: "swim",
            reason: format!("thrust-scale solve did not converge at drag area {drag_area}"),
        })
    };

    // Outer solve: drag area that makes the without-material speed hit
    // its target once the with-material speed is pinned.
    let residual = |cal: &mut dyn FnMut(f64, f64) -> Result<(f64, f64)>,
                    drag_area: f64,
                    guess: f64|
     -> Result<(f64, f64)> {
        let (scale, _) = cal(drag_area, guess)?;
        let p = SwimParams {
            thrust_scale: scale,
            body_drag_coeff_area_m2: drag_area,
            ..base
        };
        let mut without_cfg = cfg.clone();
        without_cfg.kind = ScenarioKind::SwimWithoutMaterial;
        without_cfg.swim = p;
        let v_wo = run_swim(&without_cfg)?.avg_speed_m_s;
        Ok((scale, v_wo.ln() - targets.v_without_m_s.ln()))
    };

    // Bracket the outer root over a wide drag-area range.
    let base_area = base.body_drag_coeff_area_m2;
    let grid: Vec<f64> = (-3..=3).map(|i| base_area * 2.0f64.powi(i)).collect();
    let mut bracket: Option<((f64, f64), (f64, f64))> = None;
    let mut prev: Option<(f64, f64)> = None;
    for &area in &grid {
        let (scale, f) = residual(&mut solve_thrust, area, thrust_guess)?;
        thrust_guess = scale;
        if let Some((pa, pf)) = prev {
            if pf == 0.0 || pf.signum() != f.signum() {
                bracket = Some(((pa, pf), (area, f)));
                break;
            }
        }
        if f.abs() < 1e-4 {
            bracket = Some(((area, f), (area, f)));
            break;
        }
        prev = Some((area, f));
    }
    let ((mut lo, mut flo), (mut hi, mut fhi)) = bracket.ok_or_else(|| SimError::Calibration {
        module: "swim",
        reason: "could not bracket the drag-area root; targets inconsistent with the model family"
            .into(),
    })?;

    let mut best_area = if flo.abs() < fhi.abs() { lo } else { hi };
    for _ in 0..60 {
        if flo.abs() < 1e-4 {
            best_area = lo;
            break;
        }
        if fhi.abs() < 1e-4 {
            best_area = hi;
            break;
        }
        // Secant proposal clipped into the bracket, else bisection.
        let mid = {
            let denom = fhi - flo;
            let sec = if denom.abs() > 1e-15 {
                hi - fhi * (hi - lo) / denom
            } else {
                0.5 * (lo + hi)
            };
            if sec > lo.min(hi) && sec < lo.max(hi) {
                sec
            } else {
                0.5 * (lo + hi)
            }
        };
        let (scale, fm) = residual(&mut solve_thrust, mid, thrust_guess)?;
        thrust_guess = scale;
        if fm.abs() < 1e-4 {
            best_area = mid;
            break;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        best_area = if flo.abs() < fhi.abs() { lo } else { hi };
    }

    let (scale, _) = solve_thrust(best_area, thrust_guess)?;
    let fitted = SwimParams {
        thrust_scale: scale,
        body_drag_coeff_area_m2: best_area,
        ..base
    };
    let (v_with, v_without) = pair_speeds(cfg, &fitted)?;
    let residual_with = (v_with - targets.v_with_m_s) / targets.v_with_m_s;
    let residual_without = (v_without - targets.v_without_m_s) / targets.v_without_m_s;
    if residual_with.abs() > 0.01 || residual_without.abs() > 0.01 {
        return Err(SimError::Calibration {
            module: "swim",
            reason: format!(
                "residuals above 1%: with {:.3}%, without {:.3}%",
                residual_with * 100.0,
                residual_without * 100.0
            ),
        });
    }
    Ok(SwimCalibration {
        params: fitted,
        v_with_m_s: v_with,
        v_without_m_s: v_without,
        residual_with,
        residual_without,
    })
}
