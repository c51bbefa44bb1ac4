//! Bending stiffness of the soil-filled hose.
//!
//! Measured bars give orderings, not absolute values, so the model is a
//! baseline hose stiffness raised by a unimodal moisture bump when soil
//! fills the hose, with a multiplicative loss per repeated loading.
//! Whether 20% moisture beats dry soil is deliberately not encoded; only
//! the peak at 11% and filled-above-empty are.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Stiffness model parameters. The absolute scale (`k_empty_n_mm`,
/// `fill_gain`) is a placeholder constrained only by the orderings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StiffnessParams {
    /// Baseline hose stiffness \[N/mm\].
    pub k_empty_n_mm: f64,
    /// Relative stiffness gain of a filled hose at the moisture peak.
    pub fill_gain: f64,
    /// Moisture fraction with the highest stiffness.
    pub moisture_peak: f64,
    /// Width of the moisture bump.
    pub moisture_width: f64,
    /// Multiplicative stiffness retention per loading repetition.
    pub degradation: f64,
    /// Load application point from the fixed section \[mm\].
    pub lever_mm: f64,
    /// Validity limit of the linearized load-displacement law \[mm\].
    pub displacement_cap_mm: f64,
}

impl Default for StiffnessParams {
    fn default() -> Self {
        StiffnessParams {
            k_empty_n_mm: 0.5,
            fill_gain: 1.5,
            moisture_peak: 0.11,
            moisture_width: 0.10,
            degradation: 0.85,
            lever_mm: 300.0,
            displacement_cap_mm: 50.0,
        }
    }
}

impl StiffnessParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.k_empty_n_mm > 0.0) {
            return Err(SimError::invalid("stiffness.k_empty_n_mm", "must be > 0"));
        }
        if !(self.fill_gain >= 0.0) {
            return Err(SimError::invalid("stiffness.fill_gain", "must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.moisture_peak) {
            return Err(SimError::invalid("stiffness.moisture_peak", "must lie in [0, 1]"));
        }
        if !(self.moisture_width > 0.0) {
            return Err(SimError::invalid("stiffness.moisture_width", "must be > 0"));
        }
        if !(self.degradation > 0.0 && self.degradation <= 1.0) {
            return Err(SimError::invalid("stiffness.degradation", "must lie in (0, 1]"));
        }
        if !(self.lever_mm > 0.0) {
            return Err(SimError::invalid("stiffness.lever_mm", "must be > 0"));
        }
        if !(self.displacement_cap_mm > 0.0) {
            return Err(SimError::invalid("stiffness.displacement_cap_mm", "must be > 0"));
        }
        Ok(())
    }
}

/// Sampled load-displacement relationship.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StiffnessCurve {
    pub displacement_mm: Vec<f64>,
    pub load_n: Vec<f64>,
}

/// Unimodal moisture bump, maximal (exactly 1) at `moisture_peak`.
pub fn moisture_factor(w: f64, p: &StiffnessParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&w) {
        return Err(SimError::invalid(
            "moisture",
            format!("must lie in [0, 1], got {w}"),
        ));
    }
    let z = (w - p.moisture_peak) / p.moisture_width;
    Ok((-z * z).exp())
}

/// Effective bending stiffness \[N/mm\].
///
/// An empty hose keeps its baseline regardless of moisture or past
/// loadings; a filled hose gains the moisture bump and loses `degradation`
/// per repetition after the first.
pub fn effective_stiffness(
    filled: bool,
    w: f64,
    repetition: u32,
    p: &StiffnessParams,
) -> Result<f64> {
    if repetition == 0 {
        return Err(SimError::invalid("repetition", "repetitions count from 1"));
    }
    if !filled {
        return Ok(p.k_empty_n_mm);
    }
    let bump = moisture_factor(w, p)?;
    let wear = p.degradation.powi(repetition as i32 - 1);
    Ok(p.k_empty_n_mm * (1.0 + p.fill_gain * bump) * wear)
}

/// Linearized tensile load at a displacement \[N\]; valid up to the
/// configured cap.
pub fn load_displacement(delta_mm: f64, stiffness_n_mm: f64, p: &StiffnessParams) -> Result<f64> {
    if !(delta_mm >= 0.0) {
        return Err(SimError::invalid("delta_mm", "must be >= 0"));
    }
    if delta_mm > p.displacement_cap_mm {
        return Err(SimError::invalid(
            "delta_mm",
            format!(
                "displacement {delta_mm} mm beyond linear range cap {} mm",
                p.displacement_cap_mm
            ),
        ));
    }
    Ok(stiffness_n_mm * delta_mm)
}

/// Sample the linear load-displacement curve from 0 to the range cap.
pub fn stiffness_curve(stiffness_n_mm: f64, points: usize, p: &StiffnessParams) -> Result<StiffnessCurve> {
    if points < 2 {
        return Err(SimError::invalid("points", "need at least two samples"));
    }
    let mut displacement = Vec::with_capacity(points);
    let mut load = Vec::with_capacity(points);
    for i in 0..points {
        let delta = p.displacement_cap_mm * i as f64 / (points - 1) as f64;
        displacement.push(delta);
        load.push(load_displacement(delta, stiffness_n_mm, p)?);
    }
    Ok(StiffnessCurve {
        displacement_mm: displacement,
        load_n: load,
    })
}
