//! Uniform-step time series, the carrier for every exported signal.
//!
//! Only uniform steps are supported: `t[i] = i * dt`. That keeps finite
//! differences and golden-file diffs simple; resampling is out of scope.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::units::Unit;

/// Tolerance for accepting an externally supplied time axis as uniform.
pub const STEP_TOLERANCE: f64 = 1e-12;

/// A named, unit-tagged series sampled at `t[i] = i * dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub name: String,
    pub unit: Unit,
    pub dt: f64,
    pub values: Vec<f64>,
}

impl TimeSeries {
    /// Build a series from a step size and samples. `t[i] = i * dt`.
    pub fn new(name: impl Into<String>, unit: Unit, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(SimError::invalid("dt", format!("must be positive and finite, got {dt}")));
        }
        if values.is_empty() {
            return Err(SimError::invalid("values", "series must not be empty"));
        }
        Ok(TimeSeries {
            name: name.into(),
            unit,
            dt,
            values,
        })
    }

    /// Build a series from an explicit time axis, which must start at zero
    /// and be uniform within [`STEP_TOLERANCE`].
    pub fn from_times(name: impl Into<String>, unit: Unit, t: &[f64], values: Vec<f64>) -> Result<Self> {
        if t.len() != values.len() {
            return Err(SimError::invalid(
                "t",
                format!("time axis length {} != values length {}", t.len(), values.len()),
            ));
        }
        if t.len() < 2 {
            return Err(SimError::invalid("t", "need at least two samples to infer dt"));
        }
        if t[0].abs() > STEP_TOLERANCE {
            return Err(SimError::invalid("t", format!("first sample must be 0, got {}", t[0])));
        }
        let dt = t[1] - t[0];
        for i in 1..t.len() {
            let step = t[i] - t[i - 1];
            if (step - dt).abs() > STEP_TOLERANCE {
                return Err(SimError::invalid(
                    "t",
                    format!("non-uniform step at index {i}: {step} vs {dt}"),
                ));
            }
        }
        TimeSeries::new(name, unit, dt, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Time of sample `i`.
    pub fn time_at(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    /// Time of the last sample.
    pub fn last_time(&self) -> f64 {
        self.time_at(self.len() - 1)
    }

    /// Materialized time axis, mostly for export.
    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time_at(i)).collect()
    }
}

/// Build a series with `t[i] = i * dt` (errors on empty input or bad dt).
pub fn make_series(dt: f64, values: Vec<f64>) -> Result<TimeSeries> {
    TimeSeries::new("series", Unit::Dimensionless, dt, values)
}

/// Mean of the samples whose time lies in `[t_start, t_end]`, inclusive.
pub fn time_average(series: &TimeSeries, t_start: f64, t_end: f64) -> Result<f64> {
    if !(t_start >= 0.0) {
        return Err(SimError::invalid("t_start", format!("must be >= 0, got {t_start}")));
    }
    if !(t_start < t_end) {
        return Err(SimError::invalid(
            "t_end",
            format!("window must satisfy t_start < t_end, got [{t_start}, {t_end}]"),
        ));
    }
    if t_end > series.last_time() + STEP_TOLERANCE {
        return Err(SimError::invalid(
            "t_end",
            format!("window end {t_end} beyond last sample {}", series.last_time()),
        ));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for (i, v) in series.values.iter().enumerate() {
        let t = series.time_at(i);
        if t >= t_start - STEP_TOLERANCE && t <= t_end + STEP_TOLERANCE {
            sum += v;
            count += 1;
        }
    }
    if count == 0 {
        return Err(SimError::invalid(
            "window",
            format!("no samples in [{t_start}, {t_end}] at dt {}", series.dt),
        ));
    }
    Ok(sum / count as f64)
}
