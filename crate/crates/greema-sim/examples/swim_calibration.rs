//! Fit the two free scalars of the swim model — hull drag area and fin
//! thrust scale — against the measured mean-speed pair, then check the
//! closed-form ratio oracle sqrt(sin(psi_with)/sin(psi_without)).
//!
//! ```bash
//! cargo run --release --example swim_calibration
//! ```

use greema_sim::config::{ScenarioConfig, ScenarioKind};
use greema_sim::swim::{calibrate_swim, SwimTargets};

fn main() -> greema_sim::Result<()> {
    let targets = SwimTargets {
        v_with_m_s: 0.158,
        v_without_m_s: 0.101,
    };
    let cfg = ScenarioConfig::default_for(ScenarioKind::SwimWithMaterial);

    let started = std::time::Instant::now();
    let fit = calibrate_swim(&targets, &cfg)?;
    println!("converged in {:.2?}", started.elapsed());
    println!("  thrust_scale            = {:.6}", fit.params.thrust_scale);
    println!(
        "  body_drag_coeff_area    = {:.6e} m^2",
        fit.params.body_drag_coeff_area_m2
    );
    println!(
        "  simulated speeds        = ({:.5}, {:.5}) m/s",
        fit.v_with_m_s, fit.v_without_m_s
    );
    println!(
        "  residuals               = ({:+.4}%, {:+.4}%)",
        fit.residual_with * 100.0,
        fit.residual_without * 100.0
    );

    let sine_ratio = ((73.607f64.to_radians()).sin() / (24.087f64.to_radians()).sin()).sqrt();
    println!("\nratio oracle:");
    println!("  sqrt(sin 73.607 / sin 24.087) = {sine_ratio:.4}");
    println!("  measured speed ratio          = {:.4}", 0.158 / 0.101);
    println!(
        "  calibrated simulator ratio    = {:.4}",
        fit.v_with_m_s / fit.v_without_m_s
    );
    Ok(())
}
