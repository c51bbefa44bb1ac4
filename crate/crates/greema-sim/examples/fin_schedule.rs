//! The feed-forward fin command: a 300 deg/s power sweep from 40 to
//! -60 deg, a 0.5 s hold, and a 100 deg/s recovery, repeating forever.
//! Prints one full cycle sampled at 50 ms.
//!
//! ```bash
//! cargo run --example fin_schedule
//! ```

use greema_sim::fin::{angular_rate_at, command_at, cycle_period, phase_at, FinSchedule};

fn main() -> greema_sim::Result<()> {
    let sched = FinSchedule::default();
    let period = cycle_period(&sched);
    println!("cycle period: {period:.6} s (= 11/6 s for the default schedule)\n");

    println!("{:>8} {:>10} {:>12} {:>12}", "t [s]", "phase", "theta [deg]", "rate [deg/s]");
    let mut t = 0.0;
    while t < period {
        println!(
            "{t:>8.2} {:>10} {:>12.2} {:>12.0}",
            format!("{:?}", phase_at(t, &sched)?),
            command_at(t, &sched)?,
            angular_rate_at(t, &sched)?
        );
        t += 0.05;
    }

    println!(
        "\nperiodicity: theta(0.3) = {:.4}, theta(0.3 + period) = {:.4}",
        command_at(0.3, &sched)?,
        command_at(0.3 + period, &sched)?
    );
    Ok(())
}
