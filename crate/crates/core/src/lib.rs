//! Valuation of travel-time reliability, unreliability and variability from
//! quantile functions of travel-time distributions.
//!
//! The crate is `no_std` (with `alloc`). Every formula is expressed through
//! the quantile function of the travel time `T` or of its standardized form
//! `X = (T − μ)/σ`.

#![no_std]
// `!(x > 0.0)` is used on purpose so NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

extern crate alloc;

pub mod benchmarks;
pub mod error;
pub mod fit;
pub mod math;
pub mod measures;
pub mod models;
pub mod optim;
pub mod prefs;
pub mod quad;
pub mod scenarios;
pub mod valuation;
pub mod verify;

pub use error::{Error, Result};
pub use measures::{Criterion, DepartureAnalysis, RiskMeasures};
pub use models::{Interpolation, ModelKind, QuantileModel, StandardizedView};
pub use prefs::SchedulingPreferences;
pub use valuation::ValuationReport;
