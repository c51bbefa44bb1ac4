//! Water uptake of the polymer-filled body: calibrate the saturation
//! rate so 325 g is absorbed in 15 minutes, then print the growth curve
//! and the total robot mass over time.
//!
//! ```bash
//! cargo run --example absorption_curve
//! ```

use greema_sim::absorption::{absorbed_mass, calibrate_rate, growth_fraction, step, AbsorptionParams, AbsorptionState};

fn main() -> greema_sim::Result<()> {
    let mut params = AbsorptionParams::default();
    params.rate_per_s = calibrate_rate(325.0, 900.0, params.capacity_g)?;
    println!(
        "calibrated rate: {:.6e} 1/s (capacity {} g)",
        params.rate_per_s, params.capacity_g
    );

    let body_dry_g = 318.0;
    println!("\n{:>8} {:>12} {:>10} {:>12}", "t [s]", "water [g]", "growth", "robot [g]");
    for minutes in [0u32, 1, 2, 5, 10, 15, 20, 30] {
        let t = f64::from(minutes) * 60.0;
        let water = absorbed_mass(t, &params)?;
        let state = AbsorptionState { t, water_mass_g: water };
        println!(
            "{t:>8.0} {water:>12.2} {:>10.4} {:>12.2}",
            growth_fraction(&state, &params),
            body_dry_g + water
        );
    }

    // Stepping composes exactly: thirty 30 s steps equal one 900 s jump.
    let mut state = AbsorptionState::initial();
    for _ in 0..30 {
        state = step(&state, 30.0, &params)?;
    }
    let jump = absorbed_mass(900.0, &params)?;
    println!(
        "\nsemigroup check: 30 x 30 s = {:.9} g vs one jump {:.9} g",
        state.water_mass_g, jump
    );
    Ok(())
}
