//! Tail-risk measures of a travel-time distribution and scheduling utilities.

use crate::error::{Error, Result};
use crate::math::rel_diff;
use crate::models::{check_open_probability, QuantileModel};
use crate::prefs::SchedulingPreferences;

/// Derived tail quantities for one model and one set of preferences.
///
/// All times are in the model's units; the `zeta_*` factors are the same
/// quantities divided by `σ` (zero for a degenerate model).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskMeasures {
    pub tau: f64,
    pub mean: f64,
    pub std: f64,
    /// Unreliability area `∫_τ^1 (F⁻¹(x) − F⁻¹(τ)) dx`.
    pub s_u: f64,
    /// Travel time budget `F⁻¹(τ)`.
    pub ttb: f64,
    /// Travel time margin `TTB − μ`.
    pub delta_ttm: f64,
    /// Expected excess delay `S_u/(1 − τ)`.
    pub delta_eed: f64,
    /// Mean-excess travel time `TTB + EED`.
    pub mett: f64,
    pub zeta_ttm: f64,
    pub zeta_eed: f64,
    /// `∫_τ^1 F_X⁻¹(x) dx / (1 − τ)`, computed directly from the tail integral.
    pub zeta_ett: f64,
    /// Reliability premium at `D = −TTB`: `((β + γ)/α)·S_u`.
    pub premium: f64,
    /// Relative gap between `zeta_ett` and `zeta_ttm + zeta_eed`.
    pub zeta_residual: f64,
    pub risk_averse: bool,
}

impl RiskMeasures {
    pub fn compute(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<Self> {
        let q = prefs.upper_tail();
        let tau = prefs.tau();
        check_open_probability(tau)?;
        let mean = model.mean();
        let std = model.std_dev();
        let ttb = model.quantile_upper(q);
        let tail = model.tail_integral(q)?;
        let s_u = (tail - q * ttb).max(0.0);
        let delta_eed = s_u / q;
        let delta_ttm = ttb - mean;
        let (zeta_ttm, zeta_eed, zeta_ett) = if std > 0.0 {
            (delta_ttm / std, delta_eed / std, (tail - q * mean) / (std * q))
        } else {
            (0.0, 0.0, 0.0)
        };
        Ok(RiskMeasures {
            tau,
            mean,
            std,
            s_u,
            ttb,
            delta_ttm,
            delta_eed,
            mett: ttb + delta_eed,
            zeta_ttm,
            zeta_eed,
            zeta_ett,
            premium: (prefs.beta() + prefs.gamma()) / prefs.alpha() * s_u,
            zeta_residual: rel_diff(zeta_ett, zeta_ttm + zeta_eed),
            risk_averse: prefs.is_risk_averse(),
        })
    }

    /// Excess travel time `σ·ζ_ETT = METT − μ`.
    pub fn ett(&self) -> f64 {
        self.std * self.zeta_ett
    }
}

/// `F⁻¹(τ)`.
pub fn travel_time_budget(model: &QuantileModel, tau: f64) -> Result<f64> {
    check_open_probability(tau)?;
    Ok(model.quantile(tau))
}

/// `S_u = ∫_τ^1 F⁻¹ − (1 − τ)F⁻¹(τ)`; zero for a degenerate model.
pub fn unreliability_area(model: &QuantileModel, tau: f64) -> Result<f64> {
    check_open_probability(tau)?;
    let q = 1.0 - tau;
    Ok((model.tail_integral(q)? - q * model.quantile(tau)).max(0.0))
}

/// `δ_EED = S_u/(1 − τ)`.
pub fn expected_excess_delay(model: &QuantileModel, tau: f64) -> Result<f64> {
    Ok(unreliability_area(model, tau)? / (1.0 - tau))
}

/// Fills every [`RiskMeasures`] field.
pub fn mean_excess_travel_time(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<RiskMeasures> {
    RiskMeasures::compute(model, prefs)
}

/// Expected scheduling utility at departure `D` (nonpositive):
/// `−{(α − β)μ − βD + (β + γ)E[(T + D)⁺]}`.
pub fn expected_utility(model: &QuantileModel, prefs: &SchedulingPreferences, departure: f64) -> Result<f64> {
    if !departure.is_finite() {
        return Err(Error::NonFiniteDeparture { departure });
    }
    let (a, b, g) = (prefs.alpha(), prefs.beta(), prefs.gamma());
    let late = model.expected_excess(-departure)?;
    Ok(-((a - b) * model.mean() - b * departure + (b + g) * late))
}

/// Realized utility of one trip with travel time `t` departing at `D`.
pub fn realized_utility(prefs: &SchedulingPreferences, departure: f64, t: f64) -> f64 {
    let arrival = departure + t;
    -(prefs.alpha() * t + prefs.beta() * (-arrival).max(0.0) + prefs.gamma() * arrival.max(0.0))
}

/// Reliability premium `((β + γ)/α)·E[(T + D)⁺]`.
pub fn reliability_premium(model: &QuantileModel, prefs: &SchedulingPreferences, departure: f64) -> Result<f64> {
    if !departure.is_finite() {
        return Err(Error::NonFiniteDeparture { departure });
    }
    Ok((prefs.beta() + prefs.gamma()) / prefs.alpha() * model.expected_excess(-departure)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    Mean,
    Ttb,
    Mett,
    Custom,
}

impl Criterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Criterion::Mean => "mean",
            Criterion::Ttb => "ttb",
            Criterion::Mett => "mett",
            Criterion::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepartureAnalysis {
    /// Departure relative to the preferred arrival time (negative = head start).
    pub departure: f64,
    /// Expected utility, nonpositive.
    pub expected_utility: f64,
    /// `|EU|`, the expected trip cost.
    pub cost: f64,
    pub criterion: Criterion,
    /// Set when the model has no variability and the departure is `−μ`.
    pub degenerate: bool,
}

fn analysis(
    model: &QuantileModel,
    prefs: &SchedulingPreferences,
    departure: f64,
    criterion: Criterion,
) -> Result<DepartureAnalysis> {
    let eu = expected_utility(model, prefs, departure)?;
    Ok(DepartureAnalysis {
        departure,
        expected_utility: eu,
        cost: -eu,
        criterion,
        degenerate: !(model.std_dev() > 0.0),
    })
}

/// Departure at `D = −μ`.
pub fn departure_mean(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<DepartureAnalysis> {
    analysis(model, prefs, -model.mean(), Criterion::Mean)
}

/// Utility-maximizing departure `D* = −F⁻¹(γ/(β + γ))`.
pub fn optimal_departure(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<DepartureAnalysis> {
    if !(model.std_dev() > 0.0) {
        return analysis(model, prefs, -model.mean(), Criterion::Ttb);
    }
    let d = -model.quantile_upper(prefs.upper_tail());
    analysis(model, prefs, d, Criterion::Ttb)
}

/// Departure `D = −η(τ)` that budgets for the mean excess beyond the TTB.
///
/// The cost is evaluated as `αμ + β·ETT + (β + γ)·E[(T − η)⁺]`.
pub fn departure_mett(model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<DepartureAnalysis> {
    if !(model.std_dev() > 0.0) {
        return analysis(model, prefs, -model.mean(), Criterion::Mett);
    }
    let m = RiskMeasures::compute(model, prefs)?;
    let excess = model.expected_excess(m.mett)?;
    let cost = prefs.alpha() * m.mean + prefs.beta() * (m.mett - m.mean) + (prefs.beta() + prefs.gamma()) * excess;
    Ok(DepartureAnalysis {
        departure: -m.mett,
        expected_utility: -cost,
        cost,
        criterion: Criterion::Mett,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::lognormal_from_moments;
    use crate::math::{abs, sqrt};
    use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
    use alloc::vec::Vec;

    fn uniform() -> QuantileModel {
        QuantileModel::uniform_with_moments(10.0, 1.0).unwrap()
    }

    fn prefs() -> SchedulingPreferences {
        SchedulingPreferences::from_penalties(2.0, 1.0, 4.0).unwrap()
    }

    #[test]
    fn uniform_closed_forms() {
        let r3 = sqrt(3.0);
        let m = RiskMeasures::compute(&uniform(), &prefs()).unwrap();
        assert!(abs(m.ttb - 11.039_230_484_541_326) < 1e-12);
        assert!(abs(m.s_u - 0.04 * r3) < 1e-12);
        assert!(abs(m.delta_eed - 0.2 * r3) < 1e-12);
        assert!(abs(m.zeta_ttm - 0.6 * r3) < 1e-12);
        assert!(abs(m.zeta_eed - 0.2 * r3) < 1e-12);
        assert!(abs(m.zeta_ett - 0.8 * r3) < 1e-12);
        assert!(abs(m.premium - 0.1 * r3) < 1e-12);
        assert!(m.zeta_residual < 1e-12);

        let ttb = optimal_departure(&uniform(), &prefs()).unwrap();
        assert!(abs(ttb.departure + 11.039_230_484_541_326) < 1e-12);
        assert!(abs(ttb.cost - 21.385_640_646_055_1) < 1e-9);
        let mett = departure_mett(&uniform(), &prefs()).unwrap();
        assert!(abs(mett.departure + 11.385_640_646_055_1) < 1e-9);
        assert!(abs(mett.cost - 21.472_243_186_433_2) < 1e-9);
    }

    #[test]
    fn free_functions_agree_with_struct() {
        let u = uniform();
        assert!(abs(travel_time_budget(&u, 0.8).unwrap() - 11.039_230_484_541_326) < 1e-12);
        assert!(abs(unreliability_area(&u, 0.8).unwrap() - 0.069_282_032_302_755) < 1e-12);
        assert!(abs(expected_excess_delay(&u, 0.8).unwrap() - 0.346_410_161_513_775) < 1e-12);
        assert!(matches!(travel_time_budget(&u, 1.0), Err(Error::ProbabilityOutOfRange { .. })));
    }

    #[test]
    fn lognormal_oracle() {
        let model = lognormal_from_moments(9.97, 1.994).unwrap();
        let p = prefs();
        let m = RiskMeasures::compute(&model, &p).unwrap();
        assert!(abs(m.ttb - 11.549_553_155_997_803) < 1e-10);
        assert!(abs(m.s_u - 0.281_533_891_867_282_32) < 1e-10);
        assert!(abs(m.delta_eed - 1.407_669_459_336_411_6) < 1e-10);
        assert!(abs(m.zeta_ttm - 0.792_153_037_110_231_97) < 1e-10);
        assert!(abs(m.zeta_eed - 0.705_952_587_430_497_3) < 1e-10);
        assert!(abs(m.zeta_ett - 1.498_105_624_540_729_3) < 1e-10);
        assert!(abs(m.premium - 0.703_834_729_668_205_81) < 1e-10);
        // β·EED = α·π exactly
        assert!(abs(p.beta() * m.delta_eed - p.alpha() * m.premium) < 1e-12);
        let d = optimal_departure(&model, &p).unwrap();
        assert!(abs(d.cost - 22.927_222_615_334_215) < 1e-9);
        let e = departure_mett(&model, &p).unwrap();
        assert!(abs(e.cost - 23.413_079_688_134_711) < 1e-9);
        let pi = reliability_premium(&model, &p, d.departure).unwrap();
        assert!(abs(pi - m.premium) < 1e-12);
    }

    #[test]
    fn degenerate_boundary() {
        let model = QuantileModel::Degenerate(10.0);
        let m = RiskMeasures::compute(&model, &prefs()).unwrap();
        assert_eq!((m.ttb, m.mett, m.s_u, m.delta_eed), (10.0, 10.0, 0.0, 0.0));
        assert_eq!((m.zeta_ttm, m.zeta_eed, m.zeta_ett), (0.0, 0.0, 0.0));
        assert_eq!(expected_utility(&model, &prefs(), -10.0).unwrap(), -20.0);
        let d = optimal_departure(&model, &prefs()).unwrap();
        assert!(d.degenerate && d.departure == -10.0 && d.cost == 20.0);
        let e = departure_mett(&model, &prefs()).unwrap();
        assert!(e.degenerate && e.departure == -10.0 && e.cost == 20.0);
        assert_eq!(reliability_premium(&model, &prefs(), -10.0).unwrap(), 0.0);
    }

    #[test]
    fn symmetric_median_departure() {
        let p = SchedulingPreferences::from_penalties(2.0, 3.0, 3.0).unwrap();
        let d = optimal_departure(&uniform(), &p).unwrap();
        assert!(abs(d.departure + 10.0) < 1e-12);
    }

    #[test]
    fn non_finite_departure() {
        assert!(matches!(
            expected_utility(&uniform(), &prefs(), f64::NAN),
            Err(Error::NonFiniteDeparture { .. })
        ));
    }

    fn suite() -> Vec<QuantileModel> {
        let mut v: Vec<QuantileModel> = [0.2, 0.41, 0.64, 0.79, 0.94, 1.10]
            .iter()
            .map(|c| lognormal_from_moments(20.0, 20.0 * c).unwrap())
            .collect();
        v.push(QuantileModel::burr(3.0, 2.0, 10.0).unwrap());
        v.push(uniform());
        v
    }

    #[test]
    fn first_order_optimality() {
        for model in suite() {
            for gamma in [1.5, 4.0, 9.0] {
                let p = SchedulingPreferences::from_penalties(2.0, 1.0, gamma).unwrap();
                let d = optimal_departure(&model, &p).unwrap();
                let h = 1e-3 * model.std_dev();
                for dd in [d.departure - h, d.departure + h] {
                    assert!(-expected_utility(&model, &p, dd).unwrap() >= d.cost);
                }
            }
        }
    }

    /// `E[U]` by direct integration of the realized utility against the density.
    fn utility_by_density(model: &QuantileModel, p: &SchedulingPreferences, d: f64) -> f64 {
        let opts = QuadOptions {
            rel_tol: 1e-12,
            ..QuadOptions::default()
        };
        let f = |t: f64| realized_utility(p, d, t) * model.pdf(t);
        // break at the kink and at the support ends, where the density may jump
        let mut cuts: Vec<f64> = alloc::vec![model.quantile(0.0), -d, model.quantile(1.0)];
        cuts.retain(|c| c.is_finite());
        cuts.sort_by(f64::total_cmp);
        let mut total = integrate(f, 0.0, cuts[0], opts).value;
        for w in cuts.windows(2) {
            total += integrate(f, w[0], w[1], opts).value;
        }
        total + integrate_to_infinity(f, cuts[cuts.len() - 1], opts).value
    }

    #[test]
    fn quantile_domain_matches_time_domain() {
        for model in suite() {
            let p = prefs();
            for d in [optimal_departure(&model, &p).unwrap().departure, -model.mean(), -1.3 * model.mean()] {
                let a = expected_utility(&model, &p, d).unwrap();
                let b = utility_by_density(&model, &p, d);
                assert!(rel_diff(a, b) < 1e-7, "{:?}: {a} vs {b}", model.kind());
            }
        }
    }

    #[test]
    fn cost_ordering_and_identities() {
        for model in suite() {
            for tau in [0.55, 0.6, 0.7, 0.8, 0.9, 0.95] {
                let p = SchedulingPreferences::from_punctuality(2.0, 1.0, tau).unwrap();
                let m = RiskMeasures::compute(&model, &p).unwrap();
                assert!(rel_diff(m.delta_eed * (1.0 - tau), m.s_u) < 1e-10);
                assert!(rel_diff(m.mett, m.ttb + m.delta_eed) < 1e-12);
                assert!(m.zeta_residual < 1e-10);
                let am = p.alpha() * model.mean();
                let ttb = optimal_departure(&model, &p).unwrap().cost;
                let mett = departure_mett(&model, &p).unwrap().cost;
                assert!(mett >= ttb && ttb >= am);
            }
        }
    }
}
