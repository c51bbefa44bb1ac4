//! Determinism and golden-file comparison: run the same scenario twice,
//! show the artifacts are byte-identical, then perturb one file and show
//! the comparison catches it with a per-file report.
//!
//! ```bash
//! cargo run --example golden_workflow
//! ```

use greema_sim::config::presets;
use greema_sim::harness::golden::compare_golden;
use greema_sim::harness::run_scenario_to;

fn main() -> greema_sim::Result<()> {
    let cfg = presets::soil_config(7);
    let base = std::env::temp_dir().join(format!("greema-golden-demo-{}", std::process::id()));
    let run = base.join("run");
    let golden = base.join("golden");

    let manifest = run_scenario_to(&cfg, &run)?;
    run_scenario_to(&cfg, &golden)?;
    println!("ran the seed-7 uptake scenario twice;");
    println!("artifacts: {:?}\n", manifest.outputs.iter().map(|e| e.path.as_str()).collect::<Vec<_>>());

    let report = compare_golden(&run, &golden)?;
    println!("comparison of the two runs:\n{report}");

    // Now nudge one number and compare again.
    let cycles = run.join("cycles.csv");
    let text = std::fs::read_to_string(&cycles)?;
    std::fs::write(&cycles, text.replacen("0.07", "0.071", 1))?;
    let report = compare_golden(&run, &golden)?;
    println!("after perturbing one bag advance:\n{report}");

    std::fs::remove_dir_all(&base)?;
    Ok(())
}
