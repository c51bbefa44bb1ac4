//! One seeded soil-intake experiment: the gripper-and-winch loop runs
//! until a full metre of bag is drawn in, with jams consuming cycles
//! without advancing. Prints the per-cycle log and the summary row.
//!
//! ```bash
//! cargo run --example soil_uptake          # seed 7
//! cargo run --example soil_uptake -- 21    # any seed
//! ```

use greema_sim::config::presets;
use greema_sim::soil::{hose_capacity, run_experiment};

fn main() -> greema_sim::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7u64);
    let cfg = presets::soil_config(seed);
    let result = run_experiment(&cfg)?;

    println!("seed {seed}\n");
    println!("{:>6} {:>10} {:>6} {:>12} {:>12}", "cycle", "grab [g]", "jam", "bag [m]", "total [g]");
    let mut bag = 0.0;
    let mut total = 0.0;
    for (i, o) in result.outcomes.iter().enumerate() {
        bag += o.bag_advance_m;
        total += o.grabbed_g;
        println!(
            "{:>6} {:>10.2} {:>6} {:>12.2} {:>12.2}",
            i + 1,
            o.grabbed_g,
            if o.jammed { "yes" } else { "" },
            bag,
            total
        );
    }

    println!("\nsummary:");
    println!("  soil acquired        {:.1} g", result.total_g);
    println!("  take-in operations   {}", result.cycles);
    println!("  jams                 {}", result.jams);
    println!("  mean per operation   {:.2} g", result.mean_per_cycle_g);
    println!("  hose capacity        {:.0} g", hose_capacity(&cfg.uptake));
    println!("\nrecorded bench runs spanned 70-500 g over 14-20 operations.");
    Ok(())
}
