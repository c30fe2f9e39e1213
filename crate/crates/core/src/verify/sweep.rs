//! Valid-condition ratio `(κ + 1)/l` across punctuality requirements.

use alloc::vec::Vec;

use super::curvature::curvature_condition;
use crate::error::{Error, Result};
use crate::models::QuantileModel;
use crate::prefs::SchedulingPreferences;
use crate::valuation::ValuationReport;

/// Grid resolution of the curvature test run at each sweep point.
pub const SWEEP_CURVATURE_GRID: usize = 100;
const RATIO_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub tau: f64,
    /// `(κ + 1)/l`; `None` where `τ ≤ ½` or `F_X⁻¹(τ) ≤ 0`, where neither is defined.
    pub ratio: Option<f64>,
    /// Curvature condition over `[τ, 1)`; `None` for non-smooth models, outside
    /// the domain, or where the stencils are unstable.
    pub curvature_holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSweep {
    pub points: Vec<SweepPoint>,
    /// Every in-domain ratio is at least `1 − 1e-9`.
    pub all_valid: bool,
}

impl ConditionSweep {
    pub fn in_domain(&self) -> usize {
        self.points.iter().filter(|p| p.ratio.is_some()).count()
    }

    pub fn outside_domain(&self) -> usize {
        self.points.len() - self.in_domain()
    }
}

/// Requires a strictly increasing grid inside `(0, 1)`.
pub fn check_tau_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid { reason: "empty grid" });
    }
    if grid.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
        return Err(Error::InvalidGrid { reason: "grid values must lie strictly between 0 and 1" });
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid { reason: "grid must be strictly increasing" });
    }
    Ok(())
}

fn sweep_one(model: &QuantileModel, tau_grid: &[f64]) -> Result<ConditionSweep> {
    if !(model.std_dev() > 0.0) {
        return Err(Error::DegenerateVariability);
    }
    let mut points = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let prefs = SchedulingPreferences::from_punctuality(1.0, 1.0, tau)?;
        let ratio = match ValuationReport::compute(model, &prefs) {
            Ok(r) => Some(r.condition_ratio()),
            Err(Error::NonRiskAverse { .. }) => None,
            Err(e) => return Err(e),
        };
        let curvature_holds = if ratio.is_some() && model.is_continuous() {
            curvature_condition(model, tau, SWEEP_CURVATURE_GRID).ok().map(|c| c.all_hold)
        } else {
            None
        };
        points.push(SweepPoint {
            tau,
            ratio,
            curvature_holds,
        });
    }
    let all_valid = points
        .iter()
        .filter_map(|p| p.ratio)
        .all(|r| r >= 1.0 - RATIO_SLACK);
    Ok(ConditionSweep { points, all_valid })
}

/// One sweep per model, in input order; a failing model does not affect the others.
pub fn condition_sweep(models: &[QuantileModel], tau_grid: &[f64]) -> Result<Vec<Result<ConditionSweep>>> {
    check_tau_grid(tau_grid)?;
    Ok(models.iter().map(|m| sweep_one(m, tau_grid)).collect())
}
