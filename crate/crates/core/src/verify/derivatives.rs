//! Finite-difference checks of how the valuations respond to preferences.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::abs;
use crate::measures::RiskMeasures;
use crate::models::QuantileModel;
use crate::prefs::SchedulingPreferences;
use crate::valuation::ValuationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DerivativeTarget {
    ZetaEttWrtBeta,
    ZetaEttWrtGamma,
    VovWrtBeta,
    VovWrtGamma,
    VovWrtTau,
    TtrrWrtAlpha,
    TtrrWrtBeta,
    TtrrWrtGamma,
    TtvrWrtAlpha,
    TtvrWrtBeta,
    TtvrWrtGamma,
}

impl DerivativeTarget {
    pub const ALL: [DerivativeTarget; 11] = [
        DerivativeTarget::ZetaEttWrtBeta,
        DerivativeTarget::ZetaEttWrtGamma,
        DerivativeTarget::VovWrtBeta,
        DerivativeTarget::VovWrtGamma,
        DerivativeTarget::VovWrtTau,
        DerivativeTarget::TtrrWrtAlpha,
        DerivativeTarget::TtrrWrtBeta,
        DerivativeTarget::TtrrWrtGamma,
        DerivativeTarget::TtvrWrtAlpha,
        DerivativeTarget::TtvrWrtBeta,
        DerivativeTarget::TtvrWrtGamma,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DerivativeTarget::ZetaEttWrtBeta => "zeta_ett_wrt_beta",
            DerivativeTarget::ZetaEttWrtGamma => "zeta_ett_wrt_gamma",
            DerivativeTarget::VovWrtBeta => "vov_wrt_beta",
            DerivativeTarget::VovWrtGamma => "vov_wrt_gamma",
            DerivativeTarget::VovWrtTau => "vov_wrt_tau",
            DerivativeTarget::TtrrWrtAlpha => "ttrr_wrt_alpha",
            DerivativeTarget::TtrrWrtBeta => "ttrr_wrt_beta",
            DerivativeTarget::TtrrWrtGamma => "ttrr_wrt_gamma",
            DerivativeTarget::TtvrWrtAlpha => "ttvr_wrt_alpha",
            DerivativeTarget::TtvrWrtBeta => "ttvr_wrt_beta",
            DerivativeTarget::TtvrWrtGamma => "ttvr_wrt_gamma",
        }
    }

    fn param(&self) -> Param {
        match self {
            DerivativeTarget::TtrrWrtAlpha | DerivativeTarget::TtvrWrtAlpha => Param::Alpha,
            DerivativeTarget::ZetaEttWrtBeta
            | DerivativeTarget::VovWrtBeta
            | DerivativeTarget::TtrrWrtBeta
            | DerivativeTarget::TtvrWrtBeta => Param::Beta,
            _ => Param::Gamma,
        }
    }

    /// Sign that holds unconditionally, or only under `l ≤ κ + 1`.
    fn sign(&self) -> (ExpectedSign, bool) {
        use DerivativeTarget::*;
        match self {
            ZetaEttWrtBeta => (ExpectedSign::NonPositive, false),
            ZetaEttWrtGamma => (ExpectedSign::NonNegative, false),
            VovWrtBeta => (ExpectedSign::NonNegative, false),
            VovWrtGamma | VovWrtTau | TtvrWrtGamma => (ExpectedSign::NonPositive, true),
            TtrrWrtAlpha | TtvrWrtAlpha => (ExpectedSign::Negative, false),
            TtrrWrtBeta | TtrrWrtGamma | TtvrWrtBeta => (ExpectedSign::NonNegative, false),
        }
    }

    fn value(&self, model: &QuantileModel, prefs: &SchedulingPreferences) -> Result<f64> {
        use DerivativeTarget::*;
        Ok(match self {
            ZetaEttWrtBeta | ZetaEttWrtGamma => RiskMeasures::compute(model, prefs)?.zeta_ett,
            VovWrtBeta | VovWrtGamma | VovWrtTau => ValuationReport::compute(model, prefs)?.vov,
            TtrrWrtAlpha | TtrrWrtBeta | TtrrWrtGamma => ValuationReport::compute(model, prefs)?.ttrr,
            TtvrWrtAlpha | TtvrWrtBeta | TtvrWrtGamma => ValuationReport::compute(model, prefs)?.ttvr,
        })
    }

    /// Analytic derivative at the base point, where one is available.
    fn closed_form(&self, r: &ValuationReport, prefs: &SchedulingPreferences) -> f64 {
        use DerivativeTarget::*;
        let m = &r.measures;
        let (a, b, g) = (prefs.alpha(), prefs.beta(), prefs.gamma());
        let bg = b + g;
        let q = prefs.upper_tail();
        let dtau_dgamma = b / (bg * bg);
        let dtau_dbeta = -g / (bg * bg);
        // dζ_ETT/dτ = ζ_EED/(1 − τ)
        let dzeta_dtau = m.zeta_eed / q;
        // ∂VOV/∂γ = −1 + F_X(ζ_ETT) + F_X⁻¹(τ)·∫_{F_X(ζ_ETT)}^1 F_X⁻¹ / ζ_ETT²
        let dvov_dgamma = -1.0 + r.f_zeta_ett + m.zeta_ttm * r.tail_ett / (m.zeta_ett * m.zeta_ett);
        match self {
            ZetaEttWrtBeta => dzeta_dtau * dtau_dbeta,
            ZetaEttWrtGamma => dzeta_dtau * dtau_dgamma,
            VovWrtGamma => dvov_dgamma,
            VovWrtTau => dvov_dgamma / dtau_dgamma,
            // d[(β+γ)∫_τ^1 F_X⁻¹]/dβ = ∫_τ^1 F_X⁻¹ + τ·F_X⁻¹(τ)
            TtrrWrtBeta => (r.tail_tau + prefs.tau() * m.zeta_ttm) / a,
            // d[(β+γ)∫_τ^1 F_X⁻¹]/dγ = (1 − τ)·ζ_EED
            TtrrWrtGamma => q * m.zeta_eed / a,
            TtrrWrtAlpha => -r.ttrr / a,
            TtvrWrtAlpha => -r.ttvr / a,
            TtvrWrtGamma => dvov_dgamma / a,
            VovWrtBeta | TtvrWrtBeta => {
                // VOV = β + (β+γ)·E⁺/ζ_ETT with E⁺ = E[(X − ζ_ETT)⁺],
                // dE⁺/dζ_ETT = −(1 − F_X(ζ_ETT)).
                let dz = dzeta_dtau * dtau_dbeta;
                let e = r.excess_ett;
                let z = m.zeta_ett;
                let dvov = 1.0 + e / z + bg * (-(1.0 - r.f_zeta_ett) * dz / z - e * dz / (z * z));
                if *self == VovWrtBeta {
                    dvov
                } else {
                    dvov / a
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Param {
    Alpha,
    Beta,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExpectedSign {
    NonNegative,
    NonPositive,
    /// Tested as `≤ −1e-9`.
    Negative,
    /// The sign is only claimed under `l ≤ κ + 1`, which fails at this point.
    Unconstrained,
}

impl ExpectedSign {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExpectedSign::NonNegative => "nonnegative",
            ExpectedSign::NonPositive => "nonpositive",
            ExpectedSign::Negative => "negative",
            ExpectedSign::Unconstrained => "unconstrained",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeCheck {
    pub target: DerivativeTarget,
    /// Central difference at `step`.
    pub estimate: f64,
    /// Central difference at `step/2`.
    pub estimate_half: f64,
    /// Richardson extrapolation of the two.
    pub extrapolated: f64,
    pub expected_sign: ExpectedSign,
    /// Absolute step used in the perturbed parameter.
    pub step: f64,
    pub pass: bool,
    /// The two step sizes disagree by more than `1e-4` relative.
    pub flagged: bool,
    pub closed_form: Option<f64>,
    /// `|extrapolated − closed_form| ≤ 1e-5·|closed_form|`.
    pub closed_form_match: Option<bool>,
}

const SIGN_SLACK: f64 = 1e-6;
const STRICT_MARGIN: f64 = 1e-9;
const RICHARDSON_TOL: f64 = 1e-4;
const CLOSED_FORM_TOL: f64 = 1e-5;

fn perturbed(prefs: &SchedulingPreferences, param: Param, value: f64) -> Result<SchedulingPreferences> {
    match param {
        Param::Alpha => prefs.with_alpha(value),
        Param::Beta => prefs.with_beta(value),
        Param::Gamma => prefs.with_gamma(value),
    }
}

fn central(
    target: DerivativeTarget,
    model: &QuantileModel,
    prefs: &SchedulingPreferences,
    h: f64,
) -> Result<f64> {
    let param = target.param();
    let x = match param {
        Param::Alpha => prefs.alpha(),
        Param::Beta => prefs.beta(),
        Param::Gamma => prefs.gamma(),
    };
    let eval = |v: f64| -> Result<f64> {
        let p = perturbed(prefs, param, v).map_err(|_| Error::StepTooLarge { step: h })?;
        if !p.is_risk_averse() {
            return Err(Error::StepTooLarge { step: h });
        }
        target.value(model, &p).map_err(|e| match e {
            Error::NonRiskAverse { .. } => Error::StepTooLarge { step: h },
            other => other,
        })
    };
    Ok((eval(x + h)? - eval(x - h)?) / (2.0 * h))
}

/// Central-difference signs of `ζ_ETT`, VOV, `ρ_TTRR` and `ρ_TTVR` with
/// respect to `α`, `β`, `γ` and (through `γ`) `τ`.
///
/// The absolute step is `step·max(1, |parameter|)`. The `τ` derivative is the
/// `γ` derivative divided by `∂τ/∂γ = β/(β + γ)²`.
pub fn check_derivative_signs(
    model: &QuantileModel,
    prefs: &SchedulingPreferences,
    step: f64,
) -> Result<Vec<DerivativeCheck>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter { name: "step", value: step });
    }
    let base = ValuationReport::compute(model, prefs)?;
    let smooth = model.is_continuous();
    let mut out = Vec::with_capacity(DerivativeTarget::ALL.len());
    for target in DerivativeTarget::ALL {
        let x = match target.param() {
            Param::Alpha => prefs.alpha(),
            Param::Beta => prefs.beta(),
            Param::Gamma => prefs.gamma(),
        };
        let h = step * x.max(1.0);
        let mut d1 = central(target, model, prefs, h)?;
        let mut d2 = central(target, model, prefs, 0.5 * h)?;
        if target == DerivativeTarget::VovWrtTau {
            let bg = prefs.beta() + prefs.gamma();
            let dtau_dgamma = prefs.beta() / (bg * bg);
            d1 /= dtau_dgamma;
            d2 /= dtau_dgamma;
        }
        let extrapolated = (4.0 * d2 - d1) / 3.0;
        let flagged = abs(d1 - d2) > RICHARDSON_TOL * abs(d1).max(1e-8);

        let (sign, conditional) = target.sign();
        let expected_sign = if conditional && !base.valid {
            ExpectedSign::Unconstrained
        } else {
            sign
        };
        let slack = SIGN_SLACK * abs(d1).max(1.0);
        let pass = match expected_sign {
            ExpectedSign::NonNegative => d1 >= -slack,
            ExpectedSign::NonPositive => d1 <= slack,
            ExpectedSign::Negative => d1 <= -STRICT_MARGIN,
            ExpectedSign::Unconstrained => true,
        };

        let closed_form = smooth.then(|| target.closed_form(&base, prefs));
        let closed_form_match =
            closed_form.map(|cf| abs(extrapolated - cf) <= CLOSED_FORM_TOL * abs(cf).max(1e-8));
        out.push(DerivativeCheck {
            target,
            estimate: d1,
            estimate_half: d2,
            extrapolated,
            expected_sign,
            step: h,
            pass,
            flagged,
            closed_form,
            closed_form_match,
        });
    }
    Ok(out)
}
