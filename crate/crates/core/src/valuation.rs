//! Monetary values of reliability, unreliability and variability.

use crate::error::{Error, Result};
use crate::math::rel_diff;
use crate::measures::{expected_utility, optimal_departure, RiskMeasures};
use crate::models::QuantileModel;
use crate::prefs::SchedulingPreferences;

/// Valuations for one model and one set of risk-averse preferences.
///
/// Rates (`vor`, `vou`, `vov`) are utility per unit time; `ttrr`, `ttvr`,
/// `kappa` and `ell` are dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValuationReport {
    pub measures: RiskMeasures,
    /// Value of reliability, per unit of travel time margin.
    pub vor: f64,
    /// Value of unreliability, per unit of expected excess delay.
    pub vou: f64,
    /// Value of variability, per unit of excess travel time.
    pub vov: f64,
    /// Reliability ratio: VOR per standard deviation over the value of time.
    pub ttrr: f64,
    /// Variability ratio `VOV/α`.
    pub ttvr: f64,
    /// `ζ_EED/ζ_TTM`.
    pub kappa: f64,
    /// Conditional tail mean of `X` beyond `ζ_ETT` over that beyond `F_X⁻¹(τ)`.
    pub ell: f64,
    /// `l ≤ κ + 1`.
    pub valid: bool,
    /// `κ + 1 − l`.
    pub margin: f64,
    /// `F_X(ζ_ETT)`.
    pub f_zeta_ett: f64,
    /// `∫_τ^1 F_X⁻¹`.
    pub tail_tau: f64,
    /// `∫_{F_X(ζ_ETT)}^1 F_X⁻¹`.
    pub tail_ett: f64,
    /// `E[(X − ζ_ETT)⁺]`.
    pub excess_ett: f64,
    /// `|EU|` at the optimal (TTB) departure, by direct expectation.
    pub cost_ttb: f64,
    /// `|EU|` at the METT departure, by direct expectation.
    pub cost_mett: f64,
    pub residuals: Residuals,
}

/// Relative disagreement between the closed formulas and independent
/// evaluations of the same quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// VOR against `(|EU_TTB| − αμ)/δ_TTM`.
    pub vor_dual: f64,
    /// VOU against `(|EU_METT| − |EU_TTB|)/δ_EED`.
    pub vou_dual: f64,
    /// VOV against `(|EU_METT| − αμ)/ETT`.
    pub vov_dual: f64,
    /// `VOV·ζ_ETT` against `VOR·ζ_TTM + VOU·ζ_EED`.
    pub decomposition: f64,
    /// `κ + 1` against `ζ_ETT/ζ_TTM`.
    pub kappa: f64,
    /// `ζ_ETT` against `ζ_TTM + ζ_EED`.
    pub zeta: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        [self.vor_dual, self.vou_dual, self.vov_dual, self.decomposition, self.kappa, self.zeta]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

impl ValuationReport {
    pub fn compute(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<Self> {
        let std = model.std_dev();
        if !(std > 0.0) {
            return Err(Error::DegenerateVariability);
        }
        let m = RiskMeasures::compute(model, prefs)?;
        if !prefs.is_risk_averse() || !(m.zeta_ttm > 0.0) {
            return Err(Error::NonRiskAverse {
                tau: prefs.tau(),
                zeta_ttm: m.zeta_ttm,
            });
        }
        let (alpha, beta, gamma) = (prefs.alpha(), prefs.beta(), prefs.gamma());
        let bg = beta + gamma;
        let q = prefs.upper_tail();

        let tail_tau = q * m.zeta_ett;
        let beyond = model.sf(m.mett);
        if !(beyond > 0.0) {
            return Err(Error::EmptyUpperTail);
        }
        let f_zeta_ett = 1.0 - beyond;
        let excess_ett = model.expected_excess(m.mett)? / std;
        let tail_ett = excess_ett + beyond * m.zeta_ett;

        let vor = bg * tail_tau / m.zeta_ttm;
        let vou = bg * excess_ett / m.zeta_eed;
        let vov = -gamma + bg * f_zeta_ett + bg * tail_ett / m.zeta_ett;
        let kappa = m.zeta_eed / m.zeta_ttm;
        let ell = tail_ett / (beyond * m.zeta_ett);

        let am = alpha * m.mean;
        let cost_ttb = optimal_departure(model, prefs)?.cost;
        let cost_mett = -expected_utility(model, prefs, -m.mett)?;
        let residuals = Residuals {
            vor_dual: rel_diff(vor, (cost_ttb - am) / m.delta_ttm),
            vou_dual: rel_diff(vou, (cost_mett - cost_ttb) / m.delta_eed),
            vov_dual: rel_diff(vov, (cost_mett - am) / m.ett()),
            decomposition: rel_diff(vov * m.zeta_ett, vor * m.zeta_ttm + vou * m.zeta_eed),
            kappa: rel_diff(kappa + 1.0, m.zeta_ett / m.zeta_ttm),
            zeta: m.zeta_residual,
        };

        Ok(ValuationReport {
            measures: m,
            vor,
            vou,
            vov,
            ttrr: bg * tail_tau / alpha,
            ttvr: vov / alpha,
            kappa,
            ell,
            valid: ell <= kappa + 1.0,
            margin: kappa + 1.0 - ell,
            f_zeta_ett,
            tail_tau,
            tail_ett,
            excess_ett,
            cost_ttb,
            cost_mett,
            residuals,
        })
    }

    /// `(κ + 1)/l`.
    pub fn condition_ratio(&self) -> f64 {
        (self.kappa + 1.0) / self.ell
    }
}

pub fn value_of_reliability(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<f64> {
    ValuationReport::compute(model, prefs).map(|r| r.vor)
}

pub fn value_of_unreliability(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<f64> {
    ValuationReport::compute(model, prefs).map(|r| r.vou)
}

pub fn value_of_variability(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<f64> {
    ValuationReport::compute(model, prefs).map(|r| r.vov)
}

/// `(κ, l)`.
pub fn kappa_and_ell(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<(f64, f64)> {
    ValuationReport::compute(model, prefs).map(|r| (r.kappa, r.ell))
}

/// Whether `l ≤ κ + 1`, with the margin `κ + 1 − l`.
pub fn valid_condition(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<(bool, f64)> {
    ValuationReport::compute(model, prefs).map(|r| (r.valid, r.margin))
}

pub fn variability_ratio(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<f64> {
    ValuationReport::compute(model, prefs).map(|r| r.ttvr)
}

pub fn reliability_ratio(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<f64> {
    ValuationReport::compute(model, prefs).map(|r| r.ttrr)
}
