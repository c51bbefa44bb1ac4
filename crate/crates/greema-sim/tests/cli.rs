//! End-to-end tests of the `greema` binary: subcommand wiring and the
//! exit-code contract (0 ok, 2 config, 3 engine, 4 calibration, 5 golden).

use std::path::Path;
use std::process::{Command, Output};

fn greema(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_greema"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn soil_config(dir: &Path, seed: u64, extra: &str) -> std::path::PathBuf {
    let path = dir.join("soil.json");
    write(
        &path,
        &format!(r#"{{"kind": "soil_uptake", "seed": {seed}{extra}}}"#),
    );
    path
}

#[test]
fn soil_run_succeeds_and_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = soil_config(dir.path(), 3, "");
    let out = dir.path().join("run");
    let result = greema(&["soil", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(0), "{result:?}");
    assert!(out.join("manifest.json").exists());
    assert!(out.join("cycles.csv").exists());
    assert!(out.join("summary.json").exists());
    assert!(out.join("uptake.svg").exists());
}

#[test]
fn missing_config_exits_2() {
    let result = greema(&["soil", "--config", "/nonexistent.json", "--out", "/tmp/x"]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn unknown_key_exits_2_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    write(&cfg, r#"{"kind": "soil_uptake", "seed": 1, "finz": 3}"#);
    let result = greema(&["soil", "--config", cfg.to_str().unwrap(), "--out", "/tmp/x"]);
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("finz"), "{stderr}");
}

#[test]
fn kind_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = soil_config(dir.path(), 1, "");
    let result = greema(&["swim", "--config", cfg.to_str().unwrap(), "--out", "/tmp/x"]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn jam_saturated_run_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = soil_config(dir.path(), 1, r#", "uptake": {"jam_prob": 1.0}"#);
    let out = dir.path().join("run");
    let result = greema(&["soil", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(3), "{result:?}");
}

#[test]
fn infeasible_calibration_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let targets = dir.path().join("targets.json");
    write(
        &targets,
        r#"{"absorption": {"target_mass_g": 500.0, "target_time_s": 900.0, "capacity_g": 400.0}}"#,
    );
    let out = dir.path().join("fit");
    let result = greema(&[
        "calibrate",
        "--config",
        targets.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(4), "{result:?}");
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("absorption"), "{stderr}");
}

#[test]
fn calibrate_writes_params_and_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let targets = dir.path().join("targets.json");
    write(
        &targets,
        r#"{
  "absorption": {"target_mass_g": 325.0, "target_time_s": 900.0, "capacity_g": 400.0},
  "uptake": {"experiments": [[280, 20], [460, 15], [70, 14], [150, 18], [500, 19]]}
}"#,
    );
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let result = greema(&[
            "calibrate",
            "--config",
            targets.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(result.status.code(), Some(0), "{result:?}");
    }
    let a = std::fs::read(out_a.join("params.json")).unwrap();
    let b = std::fs::read(out_b.join("params.json")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("rate_per_s"));
    assert!(text.contains("jam_prob"));
}

#[test]
fn compare_passes_identical_and_fails_perturbed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = soil_config(dir.path(), 9, "");
    let run = dir.path().join("run");
    let golden = dir.path().join("golden");
    for out in [&run, &golden] {
        let result =
            greema(&["soil", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(result.status.code(), Some(0));
    }
    let ok = greema(&[
        "compare",
        "--out",
        run.to_str().unwrap(),
        "--golden",
        golden.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0), "{ok:?}");

    // Perturb one sample in the run and expect exit 5 with the file named.
    let cycles = run.join("cycles.csv");
    let text = std::fs::read_to_string(&cycles).unwrap();
    let perturbed = text.replacen("0.07", "0.0701", 1);
    assert_ne!(text, perturbed);
    std::fs::write(&cycles, perturbed).unwrap();
    let fail = greema(&[
        "compare",
        "--out",
        run.to_str().unwrap(),
        "--golden",
        golden.to_str().unwrap(),
    ]);
    assert_eq!(fail.status.code(), Some(5), "{fail:?}");
    let stdout = String::from_utf8_lossy(&fail.stdout);
    assert!(stdout.contains("cycles.csv"), "{stdout}");
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = soil_config(dir.path(), 1, "");
    let run_a = dir.path().join("a");
    let run_b = dir.path().join("b");
    greema(&["soil", "--config", cfg.to_str().unwrap(), "--out", run_a.to_str().unwrap()]);
    greema(&[
        "soil",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "99",
        "--out",
        run_b.to_str().unwrap(),
    ]);
    let a = std::fs::read(run_a.join("cycles.csv")).unwrap();
    let b = std::fs::read(run_b.join("cycles.csv")).unwrap();
    assert_ne!(a, b, "seed override must change the drawn cycles");
}

#[test]
fn analyze_pipeline_from_swim_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("swim.json");
    write(
        &cfg_path,
        r#"{
  "kind": "swim_with_material",
  "seed": 2,
  "dt_s": 0.01,
  "duration_s": 40.0,
  "absorption": {"rate_per_s": 0.1115984289047781},
  "swim": {"swim_start_delay_s": 15.0}
}"#,
    );
    let run = dir.path().join("run");
    let result = greema(&["swim", "--config", cfg_path.to_str().unwrap(), "--out", run.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(0), "{result:?}");

    let analyze_cfg = dir.path().join("analyze.json");
    write(
        &analyze_cfg,
        &format!(
            r#"{{
  "track_csv": "{}",
  "segment_csv": "{}",
  "window_start_s": 25.0
}}"#,
            run.join("markers.csv").display(),
            run.join("fin_segment.csv").display()
        ),
    );
    let out = dir.path().join("analysis");
    let result = greema(&[
        "analyze",
        "--config",
        analyze_cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(0), "{result:?}");
    assert!(out.join("velocity.csv").exists());
    assert!(out.join("fin_angle.csv").exists());
    let summary = std::fs::read_to_string(out.join("summary.json")).unwrap();
    assert!(summary.contains("avg_speed"));
    assert!(summary.contains("avg_fin_angle"));
}
