//! Deterministic simulator of growing-by-eating robots.
//!
//! Two desk-scale machines are modeled end to end:
//!
//! - a fin swimmer whose body stiffens as a superabsorbent polymer soaks
//!   up water, coupling absorbed mass to fin support and thrust;
//! - a soil-ingesting arm that repeats a gripper-and-winch intake cycle,
//!   with stochastic grab amounts and jam events, plus a stiffness model
//!   for the soil-filled hose.
//!
//! Every run is a pure function of its [`config::ScenarioConfig`]:
//! identical config and seed produce byte-identical exported artifacts.
//! The [`harness`] module executes scenarios, exports CSV/JSON/SVG, and
//! compares runs against golden directories; the `greema` binary exposes
//! the same machinery as subcommands.

// Validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`:
// the negated form rejects NaN, the suggested form accepts it.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod absorption;
pub mod analysis;
pub mod config;
pub mod error;
pub mod fin;
pub mod harness;
pub mod rng;
pub mod series;
pub mod soil;
pub mod stiffness;
pub mod swim;
pub mod units;

pub use error::{Result, SimError};
