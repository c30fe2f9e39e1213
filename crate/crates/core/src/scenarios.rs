//! Trip costs under the three scheduling scenarios, route comparison, and
//! the punctuality trade-off table.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::rel_diff;
use crate::models::QuantileModel;
use crate::prefs::SchedulingPreferences;
use crate::valuation::ValuationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scenario {
    /// Departure budgets for the mean travel time only.
    Mean,
    /// Departure at the travel time budget.
    Ttb,
    /// Departure at the mean-excess travel time.
    Mett,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::Mean, Scenario::Ttb, Scenario::Mett];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::Mean => "mean",
            Scenario::Ttb => "ttb",
            Scenario::Mett => "mett",
        }
    }
}

/// Trip cost split into certainty `αμ`, reliability `δ_TTM·VOR` and
/// unreliability `δ_EED·VOU` components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripCostBreakdown {
    pub scenario: Scenario,
    pub certainty: f64,
    pub reliability: f64,
    pub unreliability: f64,
    pub total: f64,
    /// Shares of `total` in the order certainty, reliability, unreliability.
    pub percents: [f64; 3],
    /// Relative gap between `total` and `|EU|` evaluated by direct
    /// expectation at the scenario's departure (zero for [`Scenario::Mean`]).
    pub identity_residual: f64,
}

fn breakdown(scenario: Scenario, certainty: f64, reliability: f64, unreliability: f64, eu: f64) -> TripCostBreakdown {
    let total = certainty + reliability + unreliability;
    TripCostBreakdown {
        scenario,
        certainty,
        reliability,
        unreliability,
        total,
        percents: [certainty / total, reliability / total, unreliability / total],
        identity_residual: rel_diff(total, eu),
    }
}

pub fn trip_cost(model: &QuantileModel, prefs: &SchedulingPreferences, scenario: Scenario) -> Result<TripCostBreakdown> {
    let certainty = prefs.alpha() * model.mean();
    if scenario == Scenario::Mean {
        return Ok(breakdown(scenario, certainty, 0.0, 0.0, certainty));
    }
    let r = ValuationReport::compute(model, prefs)?;
    Ok(from_report(&r, prefs, scenario))
}

fn from_report(r: &ValuationReport, prefs: &SchedulingPreferences, scenario: Scenario) -> TripCostBreakdown {
    let m = &r.measures;
    let certainty = prefs.alpha() * m.mean;
    match scenario {
        Scenario::Mean => breakdown(scenario, certainty, 0.0, 0.0, certainty),
        Scenario::Ttb => breakdown(scenario, certainty, m.delta_ttm * r.vor, 0.0, r.cost_ttb),
        Scenario::Mett => breakdown(scenario, certainty, m.delta_ttm * r.vor, m.delta_eed * r.vou, r.cost_mett),
    }
}

/// All three scenario breakdowns for one route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteCosts {
    pub mean: TripCostBreakdown,
    pub ttb: TripCostBreakdown,
    pub mett: TripCostBreakdown,
}

impl RouteCosts {
    pub fn get(&self, scenario: Scenario) -> &TripCostBreakdown {
        match scenario {
            Scenario::Mean => &self.mean,
            Scenario::Ttb => &self.ttb,
            Scenario::Mett => &self.mett,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteResult {
    pub name: String,
    pub costs: Result<RouteCosts>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteComparison {
    /// In input order.
    pub routes: Vec<RouteResult>,
    /// Cheapest route per scenario (indexed like [`Scenario::ALL`]).
    pub best: [Option<String>; 3],
    /// Most expensive route per scenario.
    pub worst: [Option<String>; 3],
}

impl RouteComparison {
    pub fn best(&self, scenario: Scenario) -> Option<&str> {
        self.best[scenario as usize].as_deref()
    }

    pub fn worst(&self, scenario: Scenario) -> Option<&str> {
        self.worst[scenario as usize].as_deref()
    }
}

/// Costs every route under all three scenarios and ranks them; ties go to
/// the lexicographically smaller name. Routes whose valuation fails keep
/// their error and are left out of the ranking.
pub fn compare_routes(routes: &[(String, QuantileModel)], prefs: &SchedulingPreferences) -> Result<RouteComparison> {
    if routes.len() < 2 {
        return Err(Error::TooFewRoutes { got: routes.len() });
    }
    let results: Vec<RouteResult> = routes
        .iter()
        .map(|(name, model)| RouteResult {
            name: name.clone(),
            costs: ValuationReport::compute(model, prefs).map(|r| RouteCosts {
                mean: from_report(&r, prefs, Scenario::Mean),
                ttb: from_report(&r, prefs, Scenario::Ttb),
                mett: from_report(&r, prefs, Scenario::Mett),
            }),
        })
        .collect();

    let mut best: [Option<String>; 3] = Default::default();
    let mut worst: [Option<String>; 3] = Default::default();
    for scenario in Scenario::ALL {
        let mut ok: Vec<(f64, &str)> = results
            .iter()
            .filter_map(|r| r.costs.as_ref().ok().map(|c| (c.get(scenario).total, r.name.as_str())))
            .collect();
        ok.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
        best[scenario as usize] = ok.first().map(|x| String::from(x.1));
        // highest total; among equals the smaller name
        let top = ok.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max);
        worst[scenario as usize] = ok.iter().find(|x| x.0 == top).map(|x| String::from(x.1));
    }
    Ok(RouteComparison {
        routes: results,
        best,
        worst,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffRow {
    pub tau: f64,
    /// `γ = βτ/(1 − τ)`.
    pub gamma: f64,
    /// Excess travel time `σ·ζ_ETT`.
    pub ett: f64,
    pub ttvr: f64,
    /// Percent change of `ett` against the first row.
    pub ett_change_pct: f64,
    /// Percent change of `ttvr` against the first row.
    pub ttvr_change_pct: f64,
}

/// Excess travel time and variability ratio as `τ` rises with `α`, `β` fixed.
pub fn tradeoff_table(model: &QuantileModel, alpha: f64, beta: f64, tau_grid: &[f64]) -> Result<Vec<TradeoffRow>> {
    crate::verify::check_tau_grid(tau_grid)?;
    if tau_grid[0] <= 0.5 {
        return Err(Error::InvalidGrid { reason: "trade-off grid must lie above 0.5" });
    }
    let mut rows: Vec<TradeoffRow> = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let prefs = SchedulingPreferences::from_punctuality(alpha, beta, tau)?;
        let r = ValuationReport::compute(model, &prefs)?;
        rows.push(TradeoffRow {
            tau,
            gamma: prefs.gamma(),
            ett: r.measures.ett(),
            ttvr: r.ttvr,
            ett_change_pct: 0.0,
            ttvr_change_pct: 0.0,
        });
    }
    let (e0, v0) = (rows[0].ett, rows[0].ttvr);
    for row in rows.iter_mut() {
        row.ett_change_pct = 100.0 * (row.ett - e0) / e0;
        row.ttvr_change_pct = 100.0 * (row.ttvr - v0) / v0;
    }
    Ok(rows)
}
