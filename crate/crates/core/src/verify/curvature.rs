//! Pointwise curvature test on the quantile function:
//! `(1 − p)·F⁻¹″(p)/F⁻¹′(p) ≤ 1` on `[τ, 1)` implies `l ≤ κ + 1`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::abs;
use crate::models::QuantileModel;
use crate::prefs::SchedulingPreferences;
use crate::valuation::ValuationReport;

/// Distance from `p = 1` excluded from the grid.
pub const TAIL_EPSILON: f64 = 1e-6;
const STENCIL_FRACTION: f64 = 0.05;
const STABILITY_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvaturePoint {
    pub p: f64,
    /// `(1 − p)·F⁻¹″(p)/F⁻¹′(p)`.
    pub ratio: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub tau: f64,
    pub points: Vec<CurvaturePoint>,
    pub all_hold: bool,
    /// `l ≤ κ + 1` at this `τ`; `None` outside the risk-averse domain.
    pub valid_condition: Option<bool>,
    /// False only if every point holds and yet the valid condition fails.
    pub implication_holds: bool,
}

/// `(1 − p)·Q″/Q′` from five-point stencils in `w = 1 − p` with step `h`.
fn curvature_ratio(model: &QuantileModel, w: f64, h: f64) -> f64 {
    let f = |x: f64| model.quantile_upper(x);
    let (fm2, fm1, f0, fp1, fp2) = (f(w - 2.0 * h), f(w - h), f(w), f(w + h), f(w + 2.0 * h));
    let d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    let d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    // dQ/dp = −dQ/dw, d²Q/dp² = d²Q/dw²
    w * d2 / -d1
}

/// Tests the curvature condition on `p_i = τ + i·(1 − ε − τ)/n`,
/// `i = 0..n`, and checks that it really implies the valid condition.
///
/// Each point is differentiated with steps `h = 0.05·min(1 − p, p)` and `h/2`;
/// if the two disagree by more than `1e-3` the point is reported as
/// [`Error::NumericalCurvatureUnstable`].
pub fn curvature_condition(model: &QuantileModel, tau: f64, grid_n: usize) -> Result<CurvatureReport> {
    if !(model.std_dev() > 0.0) {
        return Err(Error::DegenerateVariability);
    }
    if !model.is_continuous() {
        return Err(Error::RequiresContinuousModel);
    }
    if !(tau > 0.0 && tau < 1.0 - TAIL_EPSILON) {
        return Err(Error::ProbabilityOutOfRange { p: tau });
    }
    if grid_n == 0 {
        return Err(Error::InvalidGrid { reason: "grid must have at least one point" });
    }
    let width = 1.0 - TAIL_EPSILON - tau;
    let mut points = Vec::with_capacity(grid_n);
    for i in 0..grid_n {
        let p = tau + i as f64 * width / grid_n as f64;
        let w = 1.0 - p;
        let h = STENCIL_FRACTION * w.min(p);
        let coarse = curvature_ratio(model, w, h);
        let fine = curvature_ratio(model, w, 0.5 * h);
        if !fine.is_finite() || abs(coarse - fine) > STABILITY_TOL * abs(fine).max(1.0) {
            return Err(Error::NumericalCurvatureUnstable { p });
        }
        points.push(CurvaturePoint {
            p,
            ratio: fine,
            holds: fine <= 1.0,
        });
    }
    let all_hold = points.iter().all(|pt| pt.holds);
    let prefs = SchedulingPreferences::from_punctuality(1.0, 1.0, tau)?;
    let valid_condition = match ValuationReport::compute(model, &prefs) {
        Ok(r) => Some(r.valid),
        Err(Error::NonRiskAverse { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CurvatureReport {
        tau,
        points,
        all_hold,
        valid_condition,
        implication_holds: !all_hold || valid_condition != Some(false),
    })
}
