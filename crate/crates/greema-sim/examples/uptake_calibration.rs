//! Method-of-moments fit of the intake model from the five recorded
//! (total, cycles) pairs, followed by a seeded Monte-Carlo sweep that
//! checks the realized pooled mean per cycle. The sweep honors the
//! GREEMA_SIM_THREADS cap.
//!
//! ```bash
//! cargo run --release --example uptake_calibration
//! GREEMA_SIM_THREADS=4 cargo run --release --example uptake_calibration
//! ```

use greema_sim::config::{ScenarioConfig, ScenarioKind};
use greema_sim::harness::map_indexed;
use greema_sim::soil::{calibrate_uptake, run_experiment, UptakeParams, REFERENCE_EXPERIMENTS};

fn main() -> greema_sim::Result<()> {
    println!("{:>12} {:>8} {:>12}", "total [g]", "cycles", "mean [g]");
    for (total, cycles) in REFERENCE_EXPERIMENTS {
        println!("{total:>12.0} {cycles:>8} {:>12.2}", total / f64::from(cycles));
    }

    let fitted = calibrate_uptake(&REFERENCE_EXPERIMENTS, &UptakeParams::default())?;
    println!("\nfitted parameters:");
    println!("  grab_mean = {:.4} g", fitted.grab_mean_g);
    println!("  grab_sd   = {:.4} g", fitted.grab_sd_g);
    println!("  jam_prob  = {:.4}", fitted.jam_prob);

    let seeds = 1000usize;
    let mut cfg = ScenarioConfig::default_for(ScenarioKind::SoilUptake);
    cfg.uptake = fitted;
    let runs = map_indexed(seeds, |seed| {
        let mut c = cfg.clone();
        c.seed = seed as u64;
        run_experiment(&c).expect("uptake run")
    });

    let total: f64 = runs.iter().map(|r| r.total_g).sum();
    let cycles: u64 = runs.iter().map(|r| u64::from(r.cycles)).sum();
    let lo = runs.iter().map(|r| r.total_g).fold(f64::INFINITY, f64::min);
    let hi = runs.iter().map(|r| r.total_g).fold(f64::NEG_INFINITY, f64::max);
    let pooled = total / cycles as f64;
    let reference = 1460.0 / 86.0;
    println!("\nmonte carlo over {seeds} seeds:");
    println!("  pooled mean per cycle = {pooled:.3} g (reference {reference:.3} g, {:+.2}%)",
        (pooled / reference - 1.0) * 100.0);
    println!("  per-experiment totals in [{lo:.0}, {hi:.0}] g");
    Ok(())
}
