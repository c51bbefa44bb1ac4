//! Stochastic cycle simulator of the soil-intake loop.
//!
//! Each cycle the gripper closes on the heap and the winch pulls 7 cm of
//! bag into the hose. With probability `jam_prob` the bag catches in the
//! gripper: the cycle is spent but nothing advances and no soil enters.
//! Otherwise the grabbed mass is a normal draw clamped to the remaining
//! hose capacity. Jam and grab draws come from distinct seeded streams,
//! so adding one draw type never perturbs the other's sequence.

use serde::{Deserialize, Serialize};

use crate::config::{ScenarioConfig, ScenarioKind};
use crate::error::{Result, SimError};
use crate::rng::RngStream;

/// The five recorded intake experiments: (total grams, cycle count).
pub const REFERENCE_EXPERIMENTS: [(f64, u32); 5] = [
    (280.0, 20),
    (460.0, 15),
    (70.0, 14),
    (150.0, 18),
    (500.0, 19),
];

/// Intake-loop parameters. The grab distribution and jam probability
/// default to the method-of-moments fit against [`REFERENCE_EXPERIMENTS`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UptakeParams {
    /// Gripper blade angle when open \[deg\].
    pub blade_open_deg: f64,
    /// Gripper blade angle when closed \[deg\].
    pub blade_closed_deg: f64,
    /// Bag pulled in per successful cycle \[m\].
    pub winch_per_cycle_m: f64,
    /// Winch time per cycle \[s\].
    pub winch_time_s: f64,
    /// Total bag length to pull in \[m\].
    pub bag_total_m: f64,
    /// Hose inner diameter \[m\].
    pub hose_inner_diameter_m: f64,
    /// Bulk density of the ingested soil \[kg/m^3\].
    pub soil_bulk_density_kg_m3: f64,
    /// Mean grabbed mass per successful cycle \[g\].
    pub grab_mean_g: f64,
    /// Standard deviation of the grabbed mass \[g\].
    pub grab_sd_g: f64,
    /// Probability that a cycle jams.
    pub jam_prob: f64,
    /// Soil moisture content as a mass fraction.
    pub moisture: f64,
}

impl Default for UptakeParams {
    fn default() -> Self {
        UptakeParams {
            blade_open_deg: 40.0,
            blade_closed_deg: -15.0,
            winch_per_cycle_m: 0.07,
            winch_time_s: 2.0,
            bag_total_m: 1.0,
            hose_inner_diameter_m: 0.0506,
            soil_bulk_density_kg_m3: 1500.0,
            grab_mean_g: 1460.0 / 75.0,
            grab_sd_g: 11.110755,
            jam_prob: 11.0 / 86.0,
            moisture: 0.20,
        }
    }
}

impl UptakeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.blade_open_deg > self.blade_closed_deg) {
            return Err(SimError::invalid(
                "uptake.blade_open_deg",
                "open angle must exceed closed angle",
            ));
        }
        if !(self.winch_per_cycle_m > 0.0) {
            return Err(SimError::invalid("uptake.winch_per_cycle_m", "must be > 0"));
        }
        if !(self.winch_time_s > 0.0) {
            return Err(SimError::invalid("uptake.winch_time_s", "must be > 0"));
        }
        if !(self.bag_total_m > 0.0) {
            return Err(SimError::invalid("uptake.bag_total_m", "must be > 0"));
        }
        if !(self.hose_inner_diameter_m > 0.0) {
            return Err(SimError::invalid("uptake.hose_inner_diameter_m", "must be > 0"));
        }
        if !(self.soil_bulk_density_kg_m3 >= 0.0) {
            return Err(SimError::invalid("uptake.soil_bulk_density_kg_m3", "must be >= 0"));
        }
        if !(self.grab_mean_g > 0.0) {
            return Err(SimError::invalid("uptake.grab_mean_g", "must be > 0"));
        }
        if !(self.grab_sd_g >= 0.0) {
            return Err(SimError::invalid("uptake.grab_sd_g", "must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.jam_prob) {
            return Err(SimError::invalid(
                "uptake.jam_prob",
                format!("must lie in [0, 1], got {}", self.jam_prob),
            ));
        }
        if !(0.0..=1.0).contains(&self.moisture) {
            return Err(SimError::invalid("uptake.moisture", "must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Successful pulls needed to draw the whole bag in.
    pub fn min_cycles(&self) -> u32 {
        (self.bag_total_m / self.winch_per_cycle_m).ceil() as u32
    }
}

/// Running totals of one experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UptakeState {
    pub bag_drawn_m: f64,
    pub soil_total_g: f64,
    pub cycles: u32,
    pub jams: u32,
}

impl UptakeState {
    pub fn initial() -> Self {
        UptakeState {
            bag_drawn_m: 0.0,
            soil_total_g: 0.0,
            cycles: 0,
            jams: 0,
        }
    }
}

/// What one cycle did.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleOutcome {
    pub grabbed_g: f64,
    pub jammed: bool,
    pub bag_advance_m: f64,
}

/// Table-style summary of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct UptakeResult {
    pub total_g: f64,
    pub cycles: u32,
    pub jams: u32,
    pub mean_per_cycle_g: f64,
    pub outcomes: Vec<CycleOutcome>,
    pub final_state: UptakeState,
}

/// The two independent random streams an uptake run consumes.
#[derive(Debug, Clone)]
pub struct UptakeStreams {
    pub jam: RngStream,
    pub grab: RngStream,
}

impl UptakeStreams {
    pub fn new(seed: u64) -> Self {
        UptakeStreams {
            jam: RngStream::new(seed, "uptake/jam"),
            grab: RngStream::new(seed, "uptake/grab"),
        }
    }
}

/// Mass the hose can hold: cylinder volume times bulk density \[g\].
pub fn hose_capacity(p: &UptakeParams) -> f64 {
    let radius = p.hose_inner_diameter_m / 2.0;
    let volume = std::f64::consts::PI * radius * radius * p.bag_total_m;
    volume * p.soil_bulk_density_kg_m3 * 1000.0
}

/// Run one intake cycle: jam check, grab draw, winch pull.
pub fn run_cycle(
    s: &UptakeState,
    p: &UptakeParams,
    streams: &mut UptakeStreams,
) -> Result<(UptakeState, CycleOutcome)> {
    if s.bag_drawn_m >= p.bag_total_m {
        return Err(SimError::Engine {
            scenario: "soil_uptake".into(),
            reason: "cycle requested after the bag was fully drawn in".into(),
        });
    }
    let jammed = streams.jam.uniform() < p.jam_prob;
    let outcome = if jammed {
        CycleOutcome {
            grabbed_g: 0.0,
            jammed: true,
            bag_advance_m: 0.0,
        }
    } else {
        let remaining = (hose_capacity(p) - s.soil_total_g).max(0.0);
        let draw = streams.grab.normal(p.grab_mean_g, p.grab_sd_g)?;
        let grabbed = draw.clamp(0.0, remaining);
        let advance = p.winch_per_cycle_m.min(p.bag_total_m - s.bag_drawn_m);
        CycleOutcome {
            grabbed_g: grabbed,
            jammed: false,
            bag_advance_m: advance,
        }
    };
    let next = UptakeState {
        bag_drawn_m: s.bag_drawn_m + outcome.bag_advance_m,
        soil_total_g: s.soil_total_g + outcome.grabbed_g,
        cycles: s.cycles + 1,
        jams: s.jams + u32::from(outcome.jammed),
    };
    Ok((next, outcome))
}

/// Repeat cycles until the whole bag is drawn in; deterministic per seed.
pub fn run_experiment(cfg: &ScenarioConfig) -> Result<UptakeResult> {
    if cfg.kind != ScenarioKind::SoilUptake {
        return Err(SimError::invalid(
            "kind",
            format!("run_experiment requires soil_uptake, got {:?}", cfg.kind),
        ));
    }
    cfg.validate()?;
    let p = &cfg.uptake;
    let mut streams = UptakeStreams::new(cfg.seed);

    // Hard cap at 10x the expected cycle count so a jam-saturated
    // configuration fails loudly instead of looping.
    let expected = p.min_cycles() as f64 / (1.0 - p.jam_prob).max(1e-3);
    let cap = (10.0 * expected).ceil().max(100.0) as u32;

    let mut state = UptakeState::initial();
    let mut outcomes = Vec::new();
    while state.bag_drawn_m < p.bag_total_m {
        if state.cycles >= cap {
            return Err(SimError::Engine {
                scenario: "soil_uptake".into(),
                reason: format!("exceeded cycle budget of {cap} (jam_prob = {})", p.jam_prob),
            });
        }
        let (next, outcome) = run_cycle(&state, p, &mut streams)?;
        state = next;
        outcomes.push(outcome);
    }

    Ok(UptakeResult {
        total_g: state.soil_total_g,
        cycles: state.cycles,
        jams: state.jams,
        mean_per_cycle_g: state.soil_total_g / state.cycles as f64,
        outcomes,
        final_state: state,
    })
}

/// Method-of-moments fit of the grab distribution and jam probability
/// from recorded (total grams, cycle count) pairs.
///
/// The jam probability comes from the pooled excess of cycles over the
/// geometric minimum, the grab mean from pooled grams per non-jam cycle,
/// and the grab spread from the across-experiment dispersion of
/// per-non-jam-cycle means.
pub fn calibrate_uptake(table: &[(f64, u32)], base: &UptakeParams) -> Result<UptakeParams> {
    if table.is_empty() {
        return Err(SimError::Calibration {
            module: "soil-uptake",
            reason: "empty experiment table".into(),
        });
    }
    for (i, &(total, cycles)) in table.iter().enumerate() {
        if !(total > 0.0) || cycles == 0 {
            return Err(SimError::Calibration {
                module: "soil-uptake",
                reason: format!("degenerate row {i}: total {total} g, {cycles} cycles"),
            });
        }
    }
    let min_cycles = base.min_cycles();
    let pooled_total: f64 = table.iter().map(|&(t, _)| t).sum();
    let pooled_cycles: u32 = table.iter().map(|&(_, c)| c).sum();
    let floor_cycles = min_cycles as u64 * table.len() as u64;
    let excess = (pooled_cycles as u64).saturating_sub(floor_cycles) as f64;
    let jam_prob = excess / pooled_cycles as f64;
    let non_jam = pooled_cycles as f64 - excess;
    let grab_mean = pooled_total / non_jam;

    // Per-experiment mean over its non-jam cycles.
    let means: Vec<f64> = table
        .iter()
        .map(|&(total, cycles)| {
            let jams = cycles.saturating_sub(min_cycles);
            total / (cycles - jams) as f64
        })
        .collect();
    let center = means.iter().sum::<f64>() / means.len() as f64;
    let variance =
        means.iter().map(|m| (m - center) * (m - center)).sum::<f64>() / means.len() as f64;
    let grab_sd = variance.sqrt();

    Ok(UptakeParams {
        grab_mean_g: grab_mean,
        grab_sd_g: grab_sd,
        jam_prob,
        ..*base
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::presets::soil_config;

    #[test]
    fn hose_capacity_reference_value() {
        let p = UptakeParams::default();
        // pi * (0.0506/2)^2 * 1.0 m * 1500 kg/m^3 = 3016.35 g
        assert!((hose_capacity(&p) - 3016.35).abs() < 0.01, "{}", hose_capacity(&p));
    }

    #[test]
    fn hose_capacity_degenerate_and_linear() {
        let zero_density = UptakeParams {
            soil_bulk_density_kg_m3: 0.0,
            ..UptakeParams::default()
        };
        assert_eq!(hose_capacity(&zero_density), 0.0);

        let half = UptakeParams {
            bag_total_m: 0.5,
            ..UptakeParams::default()
        };
        assert!((hose_capacity(&half) * 2.0 - hose_capacity(&UptakeParams::default())).abs() < 1e-9);
    }

    #[test]
    fn jam_cycle_advances_nothing() {
        let p = UptakeParams {
            jam_prob: 1.0,
            ..UptakeParams::default()
        };
        let mut streams = UptakeStreams::new(1);
        let (next, outcome) = run_cycle(&UptakeState::initial(), &p, &mut streams).unwrap();
        assert!(outcome.jammed);
        assert_eq!(outcome.grabbed_g, 0.0);
        assert_eq!(outcome.bag_advance_m, 0.0);
        assert_eq!(next.cycles, 1);
        assert_eq!(next.jams, 1);
        assert_eq!(next.bag_drawn_m, 0.0);
    }

    #[test]
    fn degenerate_distribution_grabs_exactly_the_mean() {
        let p = UptakeParams {
            jam_prob: 0.0,
            grab_mean_g: 20.0,
            grab_sd_g: 0.0,
            ..UptakeParams::default()
        };
        let mut streams = UptakeStreams::new(9);
        let (next, outcome) = run_cycle(&UptakeState::initial(), &p, &mut streams).unwrap();
        assert_eq!(outcome.grabbed_g, 20.0);
        assert!((next.bag_drawn_m - 0.07).abs() < 1e-12);
    }

    #[test]
    fn grab_clamps_to_zero_at_capacity() {
        let p = UptakeParams {
            jam_prob: 0.0,
            ..UptakeParams::default()
        };
        let full = UptakeState {
            bag_drawn_m: 0.5,
            soil_total_g: hose_capacity(&p),
            cycles: 8,
            jams: 0,
        };
        let mut streams = UptakeStreams::new(2);
        let (_, outcome) = run_cycle(&full, &p, &mut streams).unwrap();
        assert_eq!(outcome.grabbed_g, 0.0);
        assert!(!outcome.jammed);
    }

    #[test]
    fn cycle_after_exhaustion_is_an_error() {
        let p = UptakeParams::default();
        let done = UptakeState {
            bag_drawn_m: p.bag_total_m,
            soil_total_g: 100.0,
            cycles: 15,
            jams: 0,
        };
        let mut streams = UptakeStreams::new(3);
        assert!(run_cycle(&done, &p, &mut streams).is_err());
    }

    #[test]
    fn no_jams_means_exactly_fifteen_cycles() {
        let mut cfg = soil_config(4);
        cfg.uptake.jam_prob = 0.0;
        let result = run_experiment(&cfg).unwrap();
        assert_eq!(result.cycles, 15);
        assert_eq!(result.jams, 0);
        assert!((result.final_state.bag_drawn_m - cfg.uptake.bag_total_m).abs() < 1e-9);
    }

    #[test]
    fn jams_only_add_cycles() {
        for seed in 0..50 {
            let result = run_experiment(&soil_config(seed)).unwrap();
            assert!(result.cycles >= 15, "seed {seed}: {} cycles", result.cycles);
            assert_eq!(result.cycles - result.jams, 15);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = run_experiment(&soil_config(77)).unwrap();
        let b = run_experiment(&soil_config(77)).unwrap();
        assert_eq!(a, b);
        let c = run_experiment(&soil_config(78)).unwrap();
        assert_ne!(a.total_g, c.total_g);
    }

    #[test]
    fn mass_conservation_is_exact() {
        for seed in 0..20 {
            let result = run_experiment(&soil_config(seed)).unwrap();
            let from_outcomes: f64 = result.outcomes.iter().map(|o| o.grabbed_g).sum();
            assert_eq!(result.total_g, from_outcomes);
            assert!(result.total_g <= hose_capacity(&UptakeParams::default()));
        }
    }

    #[test]
    fn jam_saturated_config_fails_loudly() {
        let mut cfg = soil_config(5);
        cfg.uptake.jam_prob = 1.0;
        let err = run_experiment(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn calibration_matches_reference_arithmetic() {
        let fitted = calibrate_uptake(&REFERENCE_EXPERIMENTS, &UptakeParams::default()).unwrap();
        // 86 pooled cycles vs 75 minimum: jam_prob = 11/86.
        assert!((fitted.jam_prob - 11.0 / 86.0).abs() < 1e-12);
        // 1460 g over 75 non-jam cycles.
        assert!((fitted.grab_mean_g - 1460.0 / 75.0).abs() < 1e-9);
        // Dispersion of per-non-jam-cycle means.
        assert!((fitted.grab_sd_g - 11.110756).abs() < 1e-3, "{}", fitted.grab_sd_g);
        // Implied pooled mean per cycle: (1 - jam) * grab_mean = 1460/86.
        let implied = (1.0 - fitted.jam_prob) * fitted.grab_mean_g;
        assert!((implied - 1460.0 / 86.0).abs() < 1e-9);
    }

    #[test]
    fn default_params_match_reference_fit() {
        let fitted = calibrate_uptake(&REFERENCE_EXPERIMENTS, &UptakeParams::default()).unwrap();
        let d = UptakeParams::default();
        assert!((fitted.grab_mean_g - d.grab_mean_g).abs() < 1e-9);
        assert!((fitted.grab_sd_g - d.grab_sd_g).abs() < 1e-4);
        assert!((fitted.jam_prob - d.jam_prob).abs() < 1e-12);
    }

    #[test]
    fn calibration_single_experiment() {
        let fitted =
            calibrate_uptake(&[(500.0, 19)], &UptakeParams::default()).unwrap();
        // 4 jams inferred, so 500 g over 15 non-jam cycles.
        assert!((fitted.grab_mean_g - 500.0 / 15.0).abs() < 1e-9);
        assert_eq!(fitted.grab_sd_g, 0.0);
    }

    #[test]
    fn calibration_rejects_degenerate_tables() {
        assert!(calibrate_uptake(&[], &UptakeParams::default()).is_err());
        assert!(calibrate_uptake(&[(0.0, 10)], &UptakeParams::default()).is_err());
        assert!(calibrate_uptake(&[(100.0, 0)], &UptakeParams::default()).is_err());
    }

    #[test]
    fn monte_carlo_pooled_mean_near_reference() {
        let mut pooled_total = 0.0;
        let mut pooled_cycles = 0u64;
        for seed in 0..200 {
            let r = run_experiment(&soil_config(seed)).unwrap();
            pooled_total += r.total_g;
            pooled_cycles += r.cycles as u64;
            assert!(r.total_g >= 50.0 && r.total_g <= 600.0, "seed {seed}: {} g", r.total_g);
        }
        let pooled_mean = pooled_total / pooled_cycles as f64;
        let reference = 1460.0 / 86.0;
        assert!(
            (pooled_mean - reference).abs() / reference < 0.05,
            "pooled {pooled_mean} vs reference {reference}"
        );
    }
}
