//! Golden-directory comparison.
//!
//! Both directories must contain run manifests. Files are compared by
//! kind: CSV numerically with a per-unit absolute tolerance, everything
//! else byte for byte. Missing files are reported and comparison
//! continues; the report carries one verdict per file.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use crate::error::{Result, SimError};
use crate::units::Unit;

use super::export::parse_csv;
use super::{RunManifest, MANIFEST_FILE};

/// Absolute comparison tolerance for a series unit.
pub fn unit_tolerance(unit: Unit) -> f64 {
    match unit {
        Unit::Seconds => 1e-9,
        Unit::Meters => 1e-6,
        Unit::MetersPerSecond => 1e-6,
        Unit::Degrees => 1e-5,
        Unit::DegreesPerSecond => 1e-5,
        Unit::Grams => 1e-4,
        Unit::Newtons => 1e-9,
        Unit::NewtonsPerMillimeter => 1e-9,
        Unit::Millimeters => 1e-6,
        Unit::Count => 0.0,
        Unit::Dimensionless => 1e-9,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FileStatus {
    Match,
    Mismatch(String),
    MissingInRun,
    MissingInGolden,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileCheck {
    pub path: String,
    pub status: FileStatus,
}

/// Outcome of comparing a run directory against a golden directory.
#[derive(Debug, Clone)]
pub struct GoldenReport {
    pub checks: Vec<FileCheck>,
    pub passed: bool,
}

impl fmt::Display for GoldenReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            match &check.status {
                FileStatus::Match => writeln!(f, "OK       {}", check.path)?,
                FileStatus::Mismatch(detail) => {
                    writeln!(f, "MISMATCH {}: {}", check.path, detail)?
                }
                FileStatus::MissingInRun => writeln!(f, "MISSING  {} (not in run)", check.path)?,
                FileStatus::MissingInGolden => {
                    writeln!(f, "EXTRA    {} (not in golden)", check.path)?
                }
            }
        }
        writeln!(f, "result: {}", if self.passed { "pass" } else { "fail" })
    }
}

fn load_manifest(dir: &Path) -> Result<RunManifest> {
    let path = dir.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| {
        SimError::GoldenMismatch(format!("missing manifest {}: {e}", path.display()))
    })?;
    serde_json::from_str(&text)
        .map_err(|e| SimError::GoldenMismatch(format!("bad manifest {}: {e}", path.display())))
}

fn compare_csv(run_text: &str, golden_text: &str) -> std::result::Result<(), String> {
    let run_cols = parse_csv(run_text).map_err(|e| format!("unparseable run csv: {e}"))?;
    let golden_cols = parse_csv(golden_text).map_err(|e| format!("unparseable golden csv: {e}"))?;
    if run_cols.len() != golden_cols.len() {
        return Err(format!(
            "column count {} vs golden {}",
            run_cols.len(),
            golden_cols.len()
        ));
    }
    for (run, golden) in run_cols.iter().zip(golden_cols.iter()) {
        if run.name != golden.name || run.unit != golden.unit {
            return Err(format!(
                "column {} [{}] vs golden {} [{}]",
                run.name, run.unit, golden.name, golden.unit
            ));
        }
        if run.values.len() != golden.values.len() {
            return Err(format!(
                "column {}: {} rows vs golden {}",
                run.name,
                run.values.len(),
                golden.values.len()
            ));
        }
        let tol = unit_tolerance(run.unit);
        for (row, (a, b)) in run.values.iter().zip(golden.values.iter()).enumerate() {
            if (a - b).abs() > tol {
                return Err(format!(
                    "column {} row {}: {} vs golden {} (tolerance {} {})",
                    run.name,
                    row + 1,
                    a,
                    b,
                    tol,
                    run.unit
                ));
            }
        }
    }
    Ok(())
}

fn compare_file(run_dir: &Path, golden_dir: &Path, path: &str, kind: &str) -> FileStatus {
    let run_bytes = match std::fs::read(run_dir.join(path)) {
        Ok(b) => b,
        Err(_) => return FileStatus::MissingInRun,
    };
    let golden_bytes = match std::fs::read(golden_dir.join(path)) {
        Ok(b) => b,
        Err(_) => return FileStatus::MissingInGolden,
    };
    if run_bytes == golden_bytes {
        return FileStatus::Match;
    }
    if kind.ends_with("csv") {
        let run_text = String::from_utf8_lossy(&run_bytes);
        let golden_text = String::from_utf8_lossy(&golden_bytes);
        match compare_csv(&run_text, &golden_text) {
            Ok(()) => FileStatus::Match,
            Err(detail) => FileStatus::Mismatch(detail),
        }
    } else {
        FileStatus::Mismatch("byte content differs".into())
    }
}

/// Compare every manifest-listed artifact of `run_dir` against
/// `golden_dir`. Never fails on the first difference; the report lists
/// each file's verdict.
pub fn compare_golden(run_dir: &Path, golden_dir: &Path) -> Result<GoldenReport> {
    let run_manifest = load_manifest(run_dir)?;
    let golden_manifest = load_manifest(golden_dir)?;

    let mut checks = Vec::new();
    if run_manifest.config_digest != golden_manifest.config_digest {
        checks.push(FileCheck {
            path: MANIFEST_FILE.to_string(),
            status: FileStatus::Mismatch(format!(
                "config digest {} vs golden {}",
                run_manifest.config_digest, golden_manifest.config_digest
            )),
        });
    } else {
        checks.push(FileCheck {
            path: MANIFEST_FILE.to_string(),
            status: FileStatus::Match,
        });
    }

    let mut kinds: std::collections::BTreeMap<&str, &str> = Default::default();
    for entry in run_manifest.outputs.iter().chain(golden_manifest.outputs.iter()) {
        kinds.insert(&entry.path, &entry.kind);
    }
    let run_paths: BTreeSet<&str> = run_manifest.outputs.iter().map(|e| e.path.as_str()).collect();
    let golden_paths: BTreeSet<&str> =
        golden_manifest.outputs.iter().map(|e| e.path.as_str()).collect();

    for path in run_paths.union(&golden_paths) {
        let status = if !golden_paths.contains(path) {
            FileStatus::MissingInGolden
        } else if !run_paths.contains(path) {
            FileStatus::MissingInRun
        } else {
            compare_file(run_dir, golden_dir, path, kinds[path])
        };
        checks.push(FileCheck {
            path: path.to_string(),
            status,
        });
    }

    let passed = checks.iter().all(|c| c.status == FileStatus::Match);
    Ok(GoldenReport { checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::presets::soil_config;
    use crate::harness::run_scenario_to;

    #[test]
    fn identical_directories_pass() {
        let cfg = soil_config(11);
        let run = tempfile::tempdir().unwrap();
        let golden = tempfile::tempdir().unwrap();
        run_scenario_to(&cfg, run.path()).unwrap();
        run_scenario_to(&cfg, golden.path()).unwrap();
        let report = compare_golden(run.path(), golden.path()).unwrap();
        assert!(report.passed, "{report}");
    }

    #[test]
    fn perturbed_sample_fails_naming_file_and_row() {
        let cfg = soil_config(11);
        let run = tempfile::tempdir().unwrap();
        let golden = tempfile::tempdir().unwrap();
        run_scenario_to(&cfg, run.path()).unwrap();
        run_scenario_to(&cfg, golden.path()).unwrap();

        // Perturb one grabbed value by 1e-3 g, far above the 1e-4 g tolerance.
        let path = run.path().join("cycles.csv");
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let cells: Vec<&str> = lines[2].split(',').collect();
        let perturbed: f64 = cells[1].parse::<f64>().unwrap() + 1e-3;
        let mut new_cells: Vec<String> = cells.iter().map(|s| s.to_string()).collect();
        new_cells[1] = format!("{perturbed}");
        lines[2] = new_cells.join(",");
        std::fs::write(&path, lines.join("\n") + "\n").unwrap();

        let report = compare_golden(run.path(), golden.path()).unwrap();
        assert!(!report.passed);
        let mismatch = report
            .checks
            .iter()
            .find(|c| c.path == "cycles.csv")
            .unwrap();
        match &mismatch.status {
            FileStatus::Mismatch(detail) => {
                assert!(detail.contains("grabbed"), "{detail}");
                assert!(detail.contains("row 2"), "{detail}");
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn missing_file_reported_without_stopping() {
        let cfg = soil_config(11);
        let run = tempfile::tempdir().unwrap();
        let golden = tempfile::tempdir().unwrap();
        run_scenario_to(&cfg, run.path()).unwrap();
        run_scenario_to(&cfg, golden.path()).unwrap();
        std::fs::remove_file(run.path().join("uptake.svg")).unwrap();

        let report = compare_golden(run.path(), golden.path()).unwrap();
        assert!(!report.passed);
        let missing = report.checks.iter().find(|c| c.path == "uptake.svg").unwrap();
        assert_eq!(missing.status, FileStatus::MissingInRun);
        // The other files were still compared.
        let cycles = report.checks.iter().find(|c| c.path == "cycles.csv").unwrap();
        assert_eq!(cycles.status, FileStatus::Match);
    }

    #[test]
    fn missing_manifest_is_exit_code_five() {
        let golden = tempfile::tempdir().unwrap();
        run_scenario_to(&soil_config(1), golden.path()).unwrap();
        let empty = tempfile::tempdir().unwrap();
        let err = compare_golden(empty.path(), golden.path()).unwrap_err();
        assert_eq!(err.exit_code(), 5);
    }

    #[test]
    fn different_seed_mismatches_config_digest() {
        let run = tempfile::tempdir().unwrap();
        let golden = tempfile::tempdir().unwrap();
        run_scenario_to(&soil_config(1), run.path()).unwrap();
        run_scenario_to(&soil_config(2), golden.path()).unwrap();
        let report = compare_golden(run.path(), golden.path()).unwrap();
        assert!(!report.passed);
    }
}
