//! Unit tags carried by exported columns and scalar results.
//!
//! Angles are degrees at every API boundary and radians internally;
//! the two conversion helpers below are the only crossing points.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Unit tag attached to a time series or summary scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    Seconds,
    Meters,
    MetersPerSecond,
    Degrees,
    DegreesPerSecond,
    Grams,
    Newtons,
    NewtonsPerMillimeter,
    Millimeters,
    Count,
    /// Dimensionless quantities (growth fraction, ratios, factors).
    Dimensionless,
}

impl Unit {
    pub fn tag(&self) -> &'static str {
        match self {
            Unit::Seconds => "s",
            Unit::Meters => "m",
            Unit::MetersPerSecond => "m/s",
            Unit::Degrees => "deg",
            Unit::DegreesPerSecond => "deg/s",
            Unit::Grams => "g",
            Unit::Newtons => "N",
            Unit::NewtonsPerMillimeter => "N/mm",
            Unit::Millimeters => "mm",
            Unit::Count => "count",
            Unit::Dimensionless => "-",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Unit {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" => Ok(Unit::Seconds),
            "m" => Ok(Unit::Meters),
            "m/s" => Ok(Unit::MetersPerSecond),
            "deg" => Ok(Unit::Degrees),
            "deg/s" => Ok(Unit::DegreesPerSecond),
            "g" => Ok(Unit::Grams),
            "N" => Ok(Unit::Newtons),
            "N/mm" => Ok(Unit::NewtonsPerMillimeter),
            "mm" => Ok(Unit::Millimeters),
            "count" => Ok(Unit::Count),
            "-" => Ok(Unit::Dimensionless),
            other => Err(SimError::invalid("unit", format!("unknown unit tag {other:?}"))),
        }
    }
}

/// Convert degrees to radians, rejecting non-finite input.
pub fn deg_to_rad(degrees: f64) -> Result<f64> {
    if !degrees.is_finite() {
        return Err(SimError::invalid("degrees", format!("non-finite value {degrees}")));
    }
    Ok(degrees * std::f64::consts::PI / 180.0)
}

/// Convert radians to degrees, rejecting non-finite input.
pub fn rad_to_deg(radians: f64) -> Result<f64> {
    if !radians.is_finite() {
        return Err(SimError::invalid("radians", format!("non-finite value {radians}")));
    }
    Ok(radians * 180.0 / std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deg_to_rad_identity_and_half_turn() {
        assert_eq!(deg_to_rad(0.0).unwrap(), 0.0);
        assert!((deg_to_rad(180.0).unwrap() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn deg_to_rad_derived_value() {
        // 73.607 * pi / 180, frozen independently.
        assert!((deg_to_rad(73.607).unwrap() - 1.28469).abs() < 1e-5);
    }

    #[test]
    fn deg_to_rad_rejects_non_finite() {
        assert!(deg_to_rad(f64::NAN).is_err());
        assert!(deg_to_rad(f64::INFINITY).is_err());
    }

    #[test]
    fn rad_to_deg_round_trip() {
        let x = 37.25;
        assert!((rad_to_deg(deg_to_rad(x).unwrap()).unwrap() - x).abs() < 1e-12);
    }

    #[test]
    fn unit_tags_round_trip() {
        let all = [
            Unit::Seconds,
            Unit::Meters,
            Unit::MetersPerSecond,
            Unit::Degrees,
            Unit::DegreesPerSecond,
            Unit::Grams,
            Unit::Newtons,
            Unit::NewtonsPerMillimeter,
            Unit::Millimeters,
            Unit::Count,
            Unit::Dimensionless,
        ];
        for unit in all {
            assert_eq!(unit.tag().parse::<Unit>().unwrap(), unit);
        }
    }
}
