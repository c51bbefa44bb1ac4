//! Scenario execution and artifact export.
//!
//! `run_scenario` dispatches a validated config to its engine, writes
//! series CSV, a summary JSON, SVG plots, and finally a manifest listing
//! every artifact with its SHA-256 digest. Everything is textual and a
//! pure function of the config, so reruns are byte-identical and golden
//! comparison is a per-file diff.

pub mod analyze;
pub mod calibrate;
pub mod export;
pub mod golden;
pub mod svg;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::velocity_series;
use crate::config::{ScenarioConfig, ScenarioKind};
use crate::error::{Result, SimError};
use crate::soil;
use crate::stiffness;
use crate::swim;
use crate::units::Unit;
use export::{csv_string, json_string, Column};
use svg::{line_plot, PlotSeries};

/// Height of the fin root marker above the tank floor in the synthetic
/// side-view tracks \[m\].
const FIN_ROOT_HEIGHT_M: f64 = 0.2;
/// Length of the fin's tracked long side \[m\].
const FIN_SIDE_LENGTH_M: f64 = 0.08;

/// Where a summary scalar came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Simulated,
    CalibrationTarget,
}

/// One named scalar with its unit and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub name: String,
    pub value: f64,
    pub unit: String,
    pub provenance: Provenance,
}

impl SummaryRow {
    pub fn simulated(name: impl Into<String>, value: f64, unit: Unit) -> Self {
        SummaryRow {
            name: name.into(),
            value,
            unit: unit.tag().to_string(),
            provenance: Provenance::Simulated,
        }
    }
}

/// Table-style scenario summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub scenario: String,
    pub seed: u64,
    pub rows: Vec<SummaryRow>,
}

/// One artifact recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub kind: String,
    pub digest: String,
}

/// The run manifest, written last so its presence marks a complete run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_digest: String,
    pub tool_version: String,
    pub seed: u64,
    pub outputs: Vec<ManifestEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest of the resolved config's canonical JSON. The output directory
/// is excluded: where artifacts land does not change what the scenario is.
pub fn config_digest(cfg: &ScenarioConfig) -> Result<String> {
    let mut canonical = cfg.clone();
    canonical.output_dir = None;
    Ok(sha256_hex(json_string(&canonical)?.as_bytes()))
}

/// Thread cap from `GREEMA_SIM_THREADS`; defaults to sequential.
pub fn parallelism() -> usize {
    std::env::var("GREEMA_SIM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

/// Evaluate `f` over `0..n`, possibly on several threads, returning
/// results in index order regardless of scheduling.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = parallelism().min(n.max(1));
    if threads <= 1 {
        return (0..n).map(f).collect();
    }
    let counter = AtomicUsize::new(0);
    let mut slots: Vec<Option<T>> = Vec::with_capacity(n);
    slots.resize_with(n, || None);
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(threads);
        for _ in 0..threads {
            let f = &f;
            let counter = &counter;
            handles.push(scope.spawn(move || {
                let mut out = Vec::new();
                loop {
                    let i = counter.fetch_add(1, Ordering::Relaxed);
                    if i >= n {
                        break;
                    }
                    out.push((i, f(i)));
                }
                out
            }));
        }
        for handle in handles {
            for (i, v) in handle.join().expect("worker panicked") {
                slots[i] = Some(v);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("missing slot")).collect()
}

/// Collects artifacts and writes the manifest last.
struct OutputWriter {
    dir: PathBuf,
    entries: Vec<ManifestEntry>,
}

impl OutputWriter {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(OutputWriter {
            dir: dir.to_path_buf(),
            entries: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, kind: &str, bytes: &[u8]) -> Result<()> {
        std::fs::write(self.dir.join(name), bytes)?;
        self.entries.push(ManifestEntry {
            path: name.to_string(),
            kind: kind.to_string(),
            digest: sha256_hex(bytes),
        });
        Ok(())
    }

    fn finish(self, config_digest: String, seed: u64) -> Result<RunManifest> {
        let manifest = RunManifest {
            config_digest,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            outputs: self.entries,
        };
        std::fs::write(self.dir.join(MANIFEST_FILE), json_string(&manifest)?)?;
        Ok(manifest)
    }
}

fn strided(values: &[f64], stride: usize) -> Vec<f64> {
    values.iter().copied().step_by(stride.max(1)).collect()
}

/// Run a scenario into its configured output directory.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunManifest> {
    let dir = cfg.output_dir.clone().ok_or_else(|| {
        SimError::Config("scenario has no output_dir; pass --out or set it in the config".into())
    })?;
    run_scenario_to(cfg, &dir)
}

/// Run a scenario into an explicit directory (overriding `output_dir`).
pub fn run_scenario_to(cfg: &ScenarioConfig, dir: &Path) -> Result<RunManifest> {
    cfg.validate().map_err(|e| match e {
        SimError::Invalid { field, reason } => {
            SimError::Config(format!("invalid {field}: {reason}"))
        }
        other => other,
    })?;
    let digest = config_digest(cfg)?;
    let mut writer = OutputWriter::new(dir)?;
    match cfg.kind {
        ScenarioKind::SwimWithMaterial | ScenarioKind::SwimWithoutMaterial => {
            write_swim(cfg, &mut writer)?
        }
        ScenarioKind::SoilUptake => write_soil(cfg, &mut writer)?,
        ScenarioKind::StiffnessSweep => write_stiffness(cfg, &mut writer)?,
    }
    writer.finish(digest, cfg.seed)
}

fn write_swim(cfg: &ScenarioConfig, writer: &mut OutputWriter) -> Result<()> {
    let result = swim::run_swim(cfg)?;
    let stride = cfg.output_stride;
    let t = strided(&result.trajectory.times(), stride);
    let x = strided(&result.trajectory.values, stride);
    let v = strided(&result.velocity.values, stride);
    let angle = strided(&result.fin_angle.values, stride);
    let growth = strided(&result.growth.values, stride);

    writer.write(
        "series.csv",
        "series-csv",
        csv_string(&[
            Column::new("t", Unit::Seconds, &t),
            Column::new("x", Unit::Meters, &x),
            Column::new("velocity", Unit::MetersPerSecond, &v),
            Column::new("fin_angle", Unit::Degrees, &angle),
            Column::new("growth", Unit::Dimensionless, &growth),
        ])?
        .as_bytes(),
    )?;

    // Synthetic marker tracks, the analysis module's input format: the
    // float-center marker and the fin long-side endpoints in side view.
    let y_zero = vec![0.0; t.len()];
    writer.write(
        "markers.csv",
        "track-csv",
        csv_string(&[
            Column::new("t", Unit::Seconds, &t),
            Column::new("x", Unit::Meters, &x),
            Column::new("y", Unit::Meters, &y_zero),
        ])?
        .as_bytes(),
    )?;

    let ay: Vec<f64> = vec![FIN_ROOT_HEIGHT_M; t.len()];
    let mut bx = Vec::with_capacity(t.len());
    let mut by = Vec::with_capacity(t.len());
    for (xi, psi) in x.iter().zip(angle.iter()) {
        let rad = psi.to_radians();
        bx.push(xi + FIN_SIDE_LENGTH_M * rad.cos());
        by.push(FIN_ROOT_HEIGHT_M - FIN_SIDE_LENGTH_M * rad.sin());
    }
    writer.write(
        "fin_segment.csv",
        "track-csv",
        csv_string(&[
            Column::new("t", Unit::Seconds, &t),
            Column::new("ax", Unit::Meters, &x),
            Column::new("ay", Unit::Meters, &ay),
            Column::new("bx", Unit::Meters, &bx),
            Column::new("by", Unit::Meters, &by),
        ])?
        .as_bytes(),
    )?;

    let summary = SummaryTable {
        scenario: cfg.kind.to_string(),
        seed: cfg.seed,
        rows: vec![
            SummaryRow::simulated("avg_speed", result.avg_speed_m_s, Unit::MetersPerSecond),
            SummaryRow::simulated("avg_fin_angle", result.avg_fin_angle_deg, Unit::Degrees),
            SummaryRow::simulated(
                "final_growth",
                *result.growth.values.last().unwrap(),
                Unit::Dimensionless,
            ),
            SummaryRow::simulated("final_mass", result.final_mass_g, Unit::Grams),
            SummaryRow::simulated("window_start", result.window_start_s, Unit::Seconds),
        ],
    };
    writer.write("summary.json", "summary-json", json_string(&summary)?.as_bytes())?;

    writer.write(
        "trajectory.svg",
        "plot-svg",
        line_plot(
            &format!("{} trajectory", cfg.kind),
            "t [s]",
            "x [m]",
            &[PlotSeries {
                label: "x",
                x: &t,
                y: &x,
            }],
        )
        .as_bytes(),
    )?;
    writer.write(
        "velocity.svg",
        "plot-svg",
        line_plot(
            &format!("{} velocity", cfg.kind),
            "t [s]",
            "velocity [m/s]",
            &[PlotSeries {
                label: "velocity",
                x: &t,
                y: &v,
            }],
        )
        .as_bytes(),
    )?;
    Ok(())
}

fn write_soil(cfg: &ScenarioConfig, writer: &mut OutputWriter) -> Result<()> {
    let result = soil::run_experiment(cfg)?;
    let n = result.outcomes.len();
    let cycle_index: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    let grabbed: Vec<f64> = result.outcomes.iter().map(|o| o.grabbed_g).collect();
    let jammed: Vec<f64> = result.outcomes.iter().map(|o| f64::from(o.jammed)).collect();
    let advance: Vec<f64> = result.outcomes.iter().map(|o| o.bag_advance_m).collect();
    let mut running = 0.0;
    let cumulative: Vec<f64> = grabbed
        .iter()
        .map(|g| {
            running += g;
            running
        })
        .collect();

    writer.write(
        "cycles.csv",
        "series-csv",
        csv_string(&[
            Column::new("cycle", Unit::Count, &cycle_index),
            Column::new("grabbed", Unit::Grams, &grabbed),
            Column::new("jammed", Unit::Dimensionless, &jammed),
            Column::new("bag_advance", Unit::Meters, &advance),
            Column::new("soil_total", Unit::Grams, &cumulative),
        ])?
        .as_bytes(),
    )?;

    // The bench measurement reads the bucket scale; the robot-side total
    // must match it exactly.
    let bucket_removed: f64 = result.outcomes.iter().map(|o| o.grabbed_g).sum();
    let summary = SummaryTable {
        scenario: cfg.kind.to_string(),
        seed: cfg.seed,
        rows: vec![
            SummaryRow::simulated("total", result.total_g, Unit::Grams),
            SummaryRow::simulated("cycles", result.cycles as f64, Unit::Count),
            SummaryRow::simulated("jams", result.jams as f64, Unit::Count),
            SummaryRow::simulated("mean_per_cycle", result.mean_per_cycle_g, Unit::Grams),
            SummaryRow::simulated("bucket_removed", bucket_removed, Unit::Grams),
            SummaryRow::simulated(
                "hose_capacity",
                soil::hose_capacity(&cfg.uptake),
                Unit::Grams,
            ),
        ],
    };
    writer.write("summary.json", "summary-json", json_string(&summary)?.as_bytes())?;

    writer.write(
        "uptake.svg",
        "plot-svg",
        line_plot(
            "soil uptake",
            "cycle [count]",
            "soil total [g]",
            &[PlotSeries {
                label: "soil",
                x: &cycle_index,
                y: &cumulative,
            }],
        )
        .as_bytes(),
    )?;
    Ok(())
}

/// The four bench conditions: hose alone, then filled at each moisture.
const STIFFNESS_CONDITIONS: [(&str, bool, f64); 4] = [
    ("empty", false, 0.0),
    ("filled_w00", true, 0.0),
    ("filled_w11", true, 0.11),
    ("filled_w20", true, 0.20),
];
const STIFFNESS_REPETITIONS: u32 = 5;

fn write_stiffness(cfg: &ScenarioConfig, writer: &mut OutputWriter) -> Result<()> {
    let p = cfg.stiffness;
    let cells = STIFFNESS_CONDITIONS.len() * STIFFNESS_REPETITIONS as usize;
    let grid = map_indexed(cells, |i| {
        let (name, filled, moisture) = STIFFNESS_CONDITIONS[i / STIFFNESS_REPETITIONS as usize];
        let rep = (i % STIFFNESS_REPETITIONS as usize) as u32 + 1;
        let k = stiffness::effective_stiffness(filled, moisture, rep, &p);
        (name, filled, moisture, rep, k)
    });

    let mut condition_idx = Vec::with_capacity(cells);
    let mut filled_col = Vec::with_capacity(cells);
    let mut moisture_col = Vec::with_capacity(cells);
    let mut rep_col = Vec::with_capacity(cells);
    let mut k_col = Vec::with_capacity(cells);
    let mut rows = Vec::with_capacity(cells);
    for (i, (name, filled, moisture, rep, k)) in grid.into_iter().enumerate() {
        let k = k?;
        condition_idx.push((i / STIFFNESS_REPETITIONS as usize) as f64);
        filled_col.push(f64::from(filled));
        moisture_col.push(moisture);
        rep_col.push(rep as f64);
        k_col.push(k);
        rows.push(SummaryRow::simulated(
            format!("k_{name}_rep{rep}"),
            k,
            Unit::NewtonsPerMillimeter,
        ));
    }

    writer.write(
        "grid.csv",
        "series-csv",
        csv_string(&[
            Column::new("condition", Unit::Dimensionless, &condition_idx),
            Column::new("filled", Unit::Dimensionless, &filled_col),
            Column::new("moisture", Unit::Dimensionless, &moisture_col),
            Column::new("repetition", Unit::Count, &rep_col),
            Column::new("stiffness", Unit::NewtonsPerMillimeter, &k_col),
        ])?
        .as_bytes(),
    )?;

    let summary = SummaryTable {
        scenario: cfg.kind.to_string(),
        seed: cfg.seed,
        rows,
    };
    writer.write("summary.json", "summary-json", json_string(&summary)?.as_bytes())?;

    // First-repetition stiffness across the four conditions.
    let first_rep: Vec<f64> = k_col
        .iter()
        .enumerate()
        .filter(|(i, _)| i % STIFFNESS_REPETITIONS as usize == 0)
        .map(|(_, &k)| k)
        .collect();
    let condition_axis: Vec<f64> = (0..STIFFNESS_CONDITIONS.len()).map(|i| i as f64).collect();
    writer.write(
        "stiffness.svg",
        "plot-svg",
        line_plot(
            "stiffness by condition (repetition 1)",
            "condition [-]",
            "stiffness [N/mm]",
            &[PlotSeries {
                label: "k",
                x: &condition_axis,
                y: &first_rep,
            }],
        )
        .as_bytes(),
    )?;
    Ok(())
}

/// Re-derive analysis series from a finished swim run directory
/// (used by tests to close the loop tracks -> analysis -> averages).
pub fn velocity_from_markers(dir: &Path) -> Result<crate::series::TimeSeries> {
    let columns = export::read_csv(&dir.join("markers.csv"))?;
    let track = analyze::marker_track_from_columns(&columns)?;
    velocity_series(&track)
}
