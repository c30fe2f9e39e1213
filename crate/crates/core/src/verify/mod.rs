//! Numerical verification of the monotonicity results, the curvature
//! condition, and the analytic measures against simulation.

mod curvature;
mod derivatives;
mod monte_carlo;
mod sweep;

pub use curvature::{curvature_condition, CurvaturePoint, CurvatureReport, TAIL_EPSILON};
pub use derivatives::{check_derivative_signs, DerivativeCheck, DerivativeTarget, ExpectedSign};
pub use monte_carlo::{monte_carlo_audit, AuditEstimate, AuditQuantity, MonteCarloAudit, MIN_DRAWS};
pub use sweep::{check_tau_grid, condition_sweep, ConditionSweep, SweepPoint, SWEEP_CURVATURE_GRID};
