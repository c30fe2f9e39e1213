//! Travel-time distributions exposed through their quantile functions.

mod burr;
mod empirical;
mod lognormal;

pub use burr::BurrXii;
pub use empirical::{Empirical, Interpolation};
pub use lognormal::Lognormal;

use rand::Rng;

use crate::error::{Error, Result};
use crate::math::{exp, sqrt};
use crate::quad::{integrate_to_infinity, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelKind {
    Lognormal,
    BurrXii,
    Empirical,
    Degenerate,
    UniformTest,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Lognormal => "lognormal",
            ModelKind::BurrXii => "burr_xii",
            ModelKind::Empirical => "empirical",
            ModelKind::Degenerate => "degenerate",
            ModelKind::UniformTest => "uniform",
        }
    }
}

/// A travel-time distribution `T`.
///
/// Models are immutable values; every method is a pure function of `self`.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantileModel {
    Lognormal(Lognormal),
    BurrXii(BurrXii),
    Empirical(Empirical),
    /// All mass at one travel time.
    Degenerate(f64),
    /// Uniform on `[lower, upper]`; its linear quantile function makes every
    /// tail integral hand-computable.
    Uniform { lower: f64, upper: f64 },
}

impl QuantileModel {
    pub fn lognormal(xi: f64, psi: f64) -> Result<Self> {
        Lognormal::new(xi, psi).map(QuantileModel::Lognormal)
    }

    pub fn burr(c: f64, k: f64, scale: f64) -> Result<Self> {
        BurrXii::new(c, k, scale).map(QuantileModel::BurrXii)
    }

    pub fn degenerate(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite { what: "value" });
        }
        Ok(QuantileModel::Degenerate(value))
    }

    pub fn uniform(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(Error::NonFinite { what: "bound" });
        }
        if upper <= lower {
            return Err(Error::InvalidParameter {
                name: "upper",
                value: upper,
            });
        }
        Ok(QuantileModel::Uniform { lower, upper })
    }

    /// Uniform with the given mean and standard deviation, support `μ ± √3σ`.
    pub fn uniform_with_moments(mean: f64, std: f64) -> Result<Self> {
        let half = sqrt(3.0) * std;
        QuantileModel::uniform(mean - half, mean + half)
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            QuantileModel::Lognormal(_) => ModelKind::Lognormal,
            QuantileModel::BurrXii(_) => ModelKind::BurrXii,
            QuantileModel::Empirical(_) => ModelKind::Empirical,
            QuantileModel::Degenerate(_) => ModelKind::Degenerate,
            QuantileModel::Uniform { .. } => ModelKind::UniformTest,
        }
    }

    /// True for models with an absolutely continuous distribution and a
    /// smooth quantile function.
    pub fn is_continuous(&self) -> bool {
        matches!(
            self,
            QuantileModel::Lognormal(_) | QuantileModel::BurrXii(_) | QuantileModel::Uniform { .. }
        )
    }

    pub fn mean(&self) -> f64 {
        match self {
            QuantileModel::Lognormal(m) => m.mean(),
            QuantileModel::BurrXii(m) => m.mean(),
            QuantileModel::Empirical(m) => m.mean(),
            QuantileModel::Degenerate(v) => *v,
            QuantileModel::Uniform { lower, upper } => 0.5 * (lower + upper),
        }
    }

    pub fn std_dev(&self) -> f64 {
        match self {
            QuantileModel::Lognormal(m) => m.std_dev(),
            QuantileModel::BurrXii(m) => m.std_dev(),
            QuantileModel::Empirical(m) => m.std_dev(),
            QuantileModel::Degenerate(_) => 0.0,
            QuantileModel::Uniform { lower, upper } => (upper - lower) / sqrt(12.0),
        }
    }

    /// `F⁻¹(p)` for `p ∈ [0, 1]`; NaN outside.
    pub fn quantile(&self, p: f64) -> f64 {
        if !(0.0..=1.0).contains(&p) {
            return f64::NAN;
        }
        match self {
            QuantileModel::Lognormal(m) => m.quantile(p),
            QuantileModel::BurrXii(m) => m.quantile(p),
            QuantileModel::Empirical(m) => m.quantile(p),
            QuantileModel::Degenerate(v) => *v,
            QuantileModel::Uniform { lower, upper } => lower + (upper - lower) * p,
        }
    }

    /// `F⁻¹(1 − q)`, resolved from the upper-tail probability.
    pub fn quantile_upper(&self, q: f64) -> f64 {
        if !(0.0..=1.0).contains(&q) {
            return f64::NAN;
        }
        match self {
            QuantileModel::Lognormal(m) => m.quantile_upper(q),
            QuantileModel::BurrXii(m) => m.quantile_upper(q),
            QuantileModel::Empirical(m) => m.quantile(1.0 - q),
            QuantileModel::Degenerate(v) => *v,
            QuantileModel::Uniform { lower, upper } => upper - (upper - lower) * q,
        }
    }

    /// Right-continuous CDF.
    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            QuantileModel::Lognormal(m) => m.cdf(t),
            QuantileModel::BurrXii(m) => m.cdf(t),
            QuantileModel::Empirical(m) => m.cdf(t),
            QuantileModel::Degenerate(v) => {
                if t >= *v {
                    1.0
                } else {
                    0.0
                }
            }
            QuantileModel::Uniform { lower, upper } => ((t - lower) / (upper - lower)).clamp(0.0, 1.0),
        }
    }

    /// `P(T > t)`, accurate in the upper tail.
    pub fn sf(&self, t: f64) -> f64 {
        match self {
            QuantileModel::Lognormal(m) => m.sf(t),
            QuantileModel::BurrXii(m) => m.sf(t),
            QuantileModel::Uniform { lower, upper } => ((upper - t) / (upper - lower)).clamp(0.0, 1.0),
            _ => 1.0 - self.cdf(t),
        }
    }

    /// Density; zero for atoms and for the `Step` empirical rule.
    pub fn pdf(&self, t: f64) -> f64 {
        match self {
            QuantileModel::Lognormal(m) => m.pdf(t),
            QuantileModel::BurrXii(m) => m.pdf(t),
            QuantileModel::Empirical(m) => m.pdf(t),
            QuantileModel::Degenerate(_) => 0.0,
            QuantileModel::Uniform { lower, upper } => {
                if t >= *lower && t <= *upper {
                    1.0 / (upper - lower)
                } else {
                    0.0
                }
            }
        }
    }

    /// `∫_{1−q}^1 F⁻¹(x) dx` for `q ∈ [0, 1]`.
    pub fn tail_integral(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::ProbabilityOutOfRange { p: 1.0 - q });
        }
        match self {
            QuantileModel::Lognormal(m) => Ok(m.tail_integral(q)),
            QuantileModel::BurrXii(m) => m.tail_integral(q, QuadOptions::default()),
            QuantileModel::Empirical(m) => Ok(m.partial_expectation(1.0 - q)),
            QuantileModel::Degenerate(v) => Ok(q * v),
            QuantileModel::Uniform { .. } => self.tail_integral_quadrature(q, QuadOptions::default()),
        }
    }

    /// `∫_{1−q}^1 F⁻¹(x) dx` by adaptive quadrature after `x = 1 − e^(−u)`,
    /// whatever closed form the model may have.
    pub fn tail_integral_quadrature(&self, q: f64, opts: QuadOptions) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::ProbabilityOutOfRange { p: 1.0 - q });
        }
        if q == 0.0 {
            return Ok(0.0);
        }
        let integrand = |u: f64| {
            let w = exp(-u);
            if w == 0.0 {
                0.0
            } else {
                self.quantile_upper(w) * w
            }
        };
        let r = integrate_to_infinity(integrand, -crate::math::ln(q), opts);
        if !r.converged || !r.value.is_finite() {
            return Err(Error::TailDivergence {
                abs_error: r.abs_error,
            });
        }
        Ok(r.value)
    }

    /// `∫_p^1 F⁻¹(x) dx` for `0 < p < 1`.
    pub fn partial_expectation(&self, p: f64) -> Result<f64> {
        check_open_probability(p)?;
        match self {
            QuantileModel::Empirical(m) => Ok(m.partial_expectation(p)),
            _ => self.tail_integral(1.0 - p),
        }
    }

    /// `E[(T − t)⁺]`.
    pub fn expected_excess(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::NonFinite { what: "threshold" });
        }
        match self {
            QuantileModel::Lognormal(m) => Ok(m.expected_excess(t)),
            QuantileModel::Degenerate(v) => Ok((v - t).max(0.0)),
            QuantileModel::Empirical(m) => {
                let p = m.cdf(t);
                Ok((m.partial_expectation(p) - (1.0 - p) * t).max(0.0))
            }
            _ => {
                let q = self.sf(t);
                if q >= 1.0 {
                    return Ok(self.mean() - t);
                }
                Ok((self.tail_integral(q)? - q * t).max(0.0))
            }
        }
    }

    /// The same distribution in time units scaled by `factor > 0`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        if !factor.is_finite() || factor <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "factor",
                value: factor,
            });
        }
        Ok(match self {
            QuantileModel::Lognormal(m) => QuantileModel::Lognormal(m.rescaled(factor)),
            QuantileModel::BurrXii(m) => QuantileModel::BurrXii(m.rescaled(factor)),
            QuantileModel::Empirical(m) => QuantileModel::Empirical(m.rescaled(factor)),
            QuantileModel::Degenerate(v) => QuantileModel::Degenerate(v * factor),
            QuantileModel::Uniform { lower, upper } => QuantileModel::Uniform {
                lower: lower * factor,
                upper: upper * factor,
            },
        })
    }

    /// One draw of `T`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            QuantileModel::Lognormal(m) => {
                let z: f64 = rng.sample(rand_distr::StandardNormal);
                exp(m.xi() + m.psi() * z)
            }
            QuantileModel::Degenerate(v) => *v,
            _ => {
                // q ∈ (0, 1]
                let q = 1.0 - rng.random::<f64>();
                self.quantile_upper(q)
            }
        }
    }

    /// The standardized variable `X = (T − μ)/σ`.
    pub fn standardized(&self) -> Result<StandardizedView<'_>> {
        let std = self.std_dev();
        if !(std > 0.0) {
            return Err(Error::DegenerateVariability);
        }
        Ok(StandardizedView {
            model: self,
            mean: self.mean(),
            std,
        })
    }
}

pub(crate) fn check_open_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange { p })
    }
}

/// `X = (T − μ)/σ` over a borrowed model.
#[derive(Debug, Clone, Copy)]
pub struct StandardizedView<'a> {
    model: &'a QuantileModel,
    mean: f64,
    std: f64,
}

impl<'a> StandardizedView<'a> {
    pub fn model(&self) -> &'a QuantileModel {
        self.model
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std_dev(&self) -> f64 {
        self.std
    }

    pub fn to_time(&self, x: f64) -> f64 {
        self.mean + self.std * x
    }

    pub fn quantile_x(&self, p: f64) -> f64 {
        (self.model.quantile(p) - self.mean) / self.std
    }

    pub fn quantile_upper_x(&self, q: f64) -> f64 {
        (self.model.quantile_upper(q) - self.mean) / self.std
    }

    pub fn cdf_x(&self, x: f64) -> f64 {
        self.model.cdf(self.to_time(x))
    }

    pub fn sf_x(&self, x: f64) -> f64 {
        self.model.sf(self.to_time(x))
    }

    pub fn pdf_x(&self, x: f64) -> f64 {
        self.std * self.model.pdf(self.to_time(x))
    }

    /// `∫_p^1 F_X⁻¹(x) dx`.
    pub fn partial_integral(&self, p: f64) -> Result<f64> {
        let pe = self.model.partial_expectation(p)?;
        Ok((pe - (1.0 - p) * self.mean) / self.std)
    }

    /// `∫_{1−q}^1 F_X⁻¹(x) dx`.
    pub fn tail_integral_x(&self, q: f64) -> Result<f64> {
        let ti = self.model.tail_integral(q)?;
        Ok((ti - q * self.mean) / self.std)
    }

    /// `E[(X − x)⁺]`.
    pub fn expected_excess_x(&self, x: f64) -> Result<f64> {
        Ok(self.model.expected_excess(self.to_time(x))? / self.std)
    }
}

#[cfg(test)]
mod tests;
