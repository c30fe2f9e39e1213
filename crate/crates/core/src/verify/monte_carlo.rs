//! Simulation audit of the analytic tail measures and expected costs.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math::{abs, sqrt};
use crate::measures::{departure_mett, optimal_departure, realized_utility, RiskMeasures};
use crate::models::QuantileModel;
use crate::prefs::SchedulingPreferences;

pub const MIN_DRAWS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AuditQuantity {
    UnreliabilityArea,
    ExpectedExcessDelay,
    CostTtb,
    CostMett,
}

impl AuditQuantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            AuditQuantity::UnreliabilityArea => "s_u",
            AuditQuantity::ExpectedExcessDelay => "delta_eed",
            AuditQuantity::CostTtb => "cost_ttb",
            AuditQuantity::CostMett => "cost_mett",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditEstimate {
    pub quantity: AuditQuantity,
    pub estimate: f64,
    pub std_error: f64,
    pub analytic: f64,
    /// Within three standard errors of the analytic value.
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloAudit {
    pub draws: usize,
    pub seed: u64,
    pub estimates: Vec<AuditEstimate>,
}

impl MonteCarloAudit {
    pub fn all_pass(&self) -> bool {
        self.estimates.iter().all(|e| e.pass)
    }
}

/// Running mean and variance (Welford).
#[derive(Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn std_error(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            sqrt(self.m2 / (self.n - 1) as f64 / self.n as f64)
        }
    }
}

fn judged(quantity: AuditQuantity, m: &Moments, analytic: f64) -> AuditEstimate {
    let se = m.std_error();
    // the floor only matters when every draw is identical
    let floor = 1e-12 * abs(analytic).max(1.0);
    AuditEstimate {
        quantity,
        estimate: m.mean,
        std_error: se,
        analytic,
        pass: abs(m.mean - analytic) <= 3.0 * se + floor,
    }
}

/// Draws `n` seeded travel times and compares `S_u = E[(T − TTB)⁺]`,
/// `δ_EED = E[T − TTB | T > TTB]` and `|EU|` at the TTB and METT departures
/// with their analytic values.
pub fn monte_carlo_audit(
    model: &QuantileModel,
    prefs: &SchedulingPreferences,
    n: usize,
    seed: u64,
) -> Result<MonteCarloAudit> {
    if n < MIN_DRAWS {
        return Err(Error::TooFewDraws {
            needed: MIN_DRAWS,
            got: n,
        });
    }
    let measures = RiskMeasures::compute(model, prefs)?;
    let ttb = optimal_departure(model, prefs)?;
    let mett = departure_mett(model, prefs)?;
    let budget = -ttb.departure;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut area, mut excess, mut cost_ttb, mut cost_mett) =
        (Moments::default(), Moments::default(), Moments::default(), Moments::default());
    for _ in 0..n {
        let t = model.sample(&mut rng);
        let over = t - budget;
        area.push(over.max(0.0));
        if over > 0.0 {
            excess.push(over);
        }
        cost_ttb.push(-realized_utility(prefs, ttb.departure, t));
        cost_mett.push(-realized_utility(prefs, mett.departure, t));
    }
    Ok(MonteCarloAudit {
        draws: n,
        seed,
        estimates: alloc::vec![
            judged(AuditQuantity::UnreliabilityArea, &area, measures.s_u),
            judged(AuditQuantity::ExpectedExcessDelay, &excess, measures.delta_eed),
            judged(AuditQuantity::CostTtb, &cost_ttb, ttb.cost),
            judged(AuditQuantity::CostMett, &cost_mett, mett.cost),
        ],
    })
}
