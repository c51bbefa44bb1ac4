//! Bending stiffness of the soil-filled hose: the 4-condition x
//! 5-repetition grid, showing the moisture peak at 11%, filled-over-empty,
//! and the loss from repeated loading.
//!
//! ```bash
//! cargo run --example stiffness_orderings
//! ```

use greema_sim::stiffness::{effective_stiffness, load_displacement, moisture_factor, StiffnessParams};

fn main() -> greema_sim::Result<()> {
    let p = StiffnessParams::default();
    let conditions: [(&str, bool, f64); 4] = [
        ("hose alone", false, 0.0),
        ("filled, dry soil", true, 0.0),
        ("filled, 11% moisture", true, 0.11),
        ("filled, 20% moisture", true, 0.20),
    ];

    println!("effective stiffness [N/mm] by repetition:\n");
    print!("{:<22}", "condition");
    for rep in 1..=5 {
        print!(" {:>8}", format!("rep {rep}"));
    }
    println!();
    for (name, filled, w) in conditions {
        print!("{name:<22}");
        for rep in 1..=5 {
            print!(" {:>8.4}", effective_stiffness(filled, w, rep, &p)?);
        }
        println!();
    }

    println!("\nmoisture bump (peak at {}):", p.moisture_peak);
    for w in [0.0, 0.05, 0.11, 0.15, 0.20] {
        println!("  w = {w:.2}: factor {:.4}", moisture_factor(w, &p)?);
    }

    let k = effective_stiffness(true, 0.11, 1, &p)?;
    println!("\nlinearized load at 10 mm for the stiffest case: {:.3} N", load_displacement(10.0, k, &p)?);
    Ok(())
}
