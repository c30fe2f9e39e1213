use crate::error::{Error, Result};
use crate::math::{exp, expm1, ln, normal_cdf, normal_pdf, normal_quantile, normal_sf, sqrt};

/// `T = exp(ξ + ψZ)` with `Z` standard normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lognormal {
    xi: f64,
    psi: f64,
}

impl Lognormal {
    pub fn new(xi: f64, psi: f64) -> Result<Self> {
        if !xi.is_finite() {
            return Err(Error::NonFinite { what: "xi" });
        }
        if !psi.is_finite() || psi <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "psi",
                value: psi,
            });
        }
        Ok(Lognormal { xi, psi })
    }

    /// Matches the first two moments: `ψ² = ln(1 + CoV²)`, `ξ = ln μ − ψ²/2`.
    pub(crate) fn from_moments(mean: f64, std: f64) -> Result<Self> {
        let cov = std / mean;
        let psi2 = crate::math::log1p(cov * cov);
        Lognormal::new(ln(mean) - 0.5 * psi2, sqrt(psi2))
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn mean(&self) -> f64 {
        exp(self.xi + 0.5 * self.psi * self.psi)
    }

    pub fn std_dev(&self) -> f64 {
        let s2 = self.psi * self.psi;
        self.mean() * sqrt(expm1(s2))
    }

    fn z(&self, t: f64) -> f64 {
        (ln(t) - self.xi) / self.psi
    }

    pub fn quantile(&self, p: f64) -> f64 {
        exp(self.xi + self.psi * normal_quantile(p))
    }

    pub fn quantile_upper(&self, q: f64) -> f64 {
        exp(self.xi - self.psi * normal_quantile(q))
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            normal_cdf(self.z(t))
        }
    }

    pub fn sf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            1.0
        } else {
            normal_sf(self.z(t))
        }
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            normal_pdf(self.z(t)) / (t * self.psi)
        }
    }

    /// `∫_{1−q}^1 F⁻¹ = m·Φ(ψ + Φ⁻¹(q))`.
    pub fn tail_integral(&self, q: f64) -> f64 {
        self.mean() * normal_cdf(self.psi + normal_quantile(q))
    }

    /// `E[(T − t)⁺] = m·Φ(ψ − z) − t·Φ(−z)`.
    pub fn expected_excess(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.mean() - t;
        }
        let z = self.z(t);
        (self.mean() * normal_cdf(self.psi - z) - t * normal_sf(z)).max(0.0)
    }

    pub(crate) fn rescaled(&self, c: f64) -> Self {
        Lognormal {
            xi: self.xi + ln(c),
            psi: self.psi,
        }
    }
}
