//! Post-processing of marker tracks, mirroring a video-tracking pipeline:
//! speeds from a tracked marker, fin angles from the tracked endpoints of
//! the fin's long side, and window averages. Consumes simulated tracks.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::series::{time_average, TimeSeries};
use crate::units::Unit;

/// A tracked point over time; `y` is zero for surge-only runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkerTrack {
    pub dt: f64,
    pub x_m: Vec<f64>,
    pub y_m: Vec<f64>,
}

impl MarkerTrack {
    pub fn new(dt: f64, x_m: Vec<f64>, y_m: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(SimError::invalid("dt", format!("must be > 0, got {dt}")));
        }
        if x_m.len() != y_m.len() {
            return Err(SimError::invalid(
                "track",
                format!("x length {} != y length {}", x_m.len(), y_m.len()),
            ));
        }
        Ok(MarkerTrack { dt, x_m, y_m })
    }

    /// Surge-only track with `y = 0` everywhere.
    pub fn surge_only(dt: f64, x_m: Vec<f64>) -> Result<Self> {
        let y = vec![0.0; x_m.len()];
        MarkerTrack::new(dt, x_m, y)
    }

    pub fn len(&self) -> usize {
        self.x_m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_m.is_empty()
    }
}

/// The two tracked ends of the fin's long side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentTrack {
    pub a: MarkerTrack,
    pub b: MarkerTrack,
}

impl SegmentTrack {
    pub fn new(a: MarkerTrack, b: MarkerTrack) -> Result<Self> {
        if a.len() != b.len() {
            return Err(SimError::invalid(
                "segment",
                format!("endpoint lengths differ: {} vs {}", a.len(), b.len()),
            ));
        }
        if (a.dt - b.dt).abs() > 1e-12 {
            return Err(SimError::invalid(
                "segment",
                format!("endpoint time bases differ: {} vs {}", a.dt, b.dt),
            ));
        }
        Ok(SegmentTrack { a, b })
    }
}

/// Speed magnitude from a marker track \[m/s\].
///
/// Central differences in the interior (exact for quadratic motion),
/// one-sided at the ends; length preserved.
pub fn velocity_series(track: &MarkerTrack) -> Result<TimeSeries> {
    let n = track.len();
    if n < 2 {
        return Err(SimError::invalid(
            "track",
            format!("need at least 2 samples for differentiation, got {n}"),
        ));
    }
    let dt = track.dt;
    let mut speeds = Vec::with_capacity(n);
    for i in 0..n {
        let (vx, vy) = if i == 0 {
            (
                (track.x_m[1] - track.x_m[0]) / dt,
                (track.y_m[1] - track.y_m[0]) / dt,
            )
        } else if i == n - 1 {
            (
                (track.x_m[n - 1] - track.x_m[n - 2]) / dt,
                (track.y_m[n - 1] - track.y_m[n - 2]) / dt,
            )
        } else {
            (
                (track.x_m[i + 1] - track.x_m[i - 1]) / (2.0 * dt),
                (track.y_m[i + 1] - track.y_m[i - 1]) / (2.0 * dt),
            )
        };
        speeds.push(vx.hypot(vy));
    }
    TimeSeries::new("speed", Unit::MetersPerSecond, dt, speeds)
}

/// Angle of the segment to the +x (motion) axis, folded into [0, 90] deg
/// so the result is independent of segment orientation.
pub fn fin_angle_series(segment: &SegmentTrack) -> Result<TimeSeries> {
    let n = segment.a.len();
    if n == 0 {
        return Err(SimError::invalid("segment", "empty track"));
    }
    let mut angles = Vec::with_capacity(n);
    for i in 0..n {
        let dx = segment.b.x_m[i] - segment.a.x_m[i];
        let dy = segment.b.y_m[i] - segment.a.y_m[i];
        if dx == 0.0 && dy == 0.0 {
            return Err(SimError::invalid(
                "segment",
                format!("coincident endpoints at sample {i}"),
            ));
        }
        angles.push(dy.abs().atan2(dx.abs()).to_degrees());
    }
    TimeSeries::new("fin_angle", Unit::Degrees, segment.a.dt, angles)
}

/// Window averages of a speed and fin-angle series pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwimSummary {
    pub avg_speed_m_s: f64,
    pub avg_angle_deg: f64,
}

/// Time averages over `[t_start, t_end]`, as defined by the core series
/// operations.
pub fn summarize_swim(
    speed: &TimeSeries,
    fin_angle: &TimeSeries,
    t_start: f64,
    t_end: f64,
) -> Result<SwimSummary> {
    Ok(SwimSummary {
        avg_speed_m_s: time_average(speed, t_start, t_end)?,
        avg_angle_deg: time_average(fin_angle, t_start, t_end)?,
    })
}
