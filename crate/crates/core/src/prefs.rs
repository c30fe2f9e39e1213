use crate::error::{Error, Result};

/// Scheduling preferences: travel-time rate `α` (also the value of time),
/// early-arrival rate `β`, late-arrival rate `γ`, and the implied
/// punctuality requirement `τ = γ/(β + γ)`.
///
/// The preferred arrival time is the origin of the clock, so a departure
/// `D` is negative and arrival is `D + T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchedulingPreferences {
    alpha: f64,
    beta: f64,
    gamma: f64,
    tau: f64,
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidPreferences {
            reason: match name {
                "alpha" => "alpha must be positive and finite",
                "beta" => "beta must be positive and finite",
                _ => "gamma must be positive and finite",
            },
        })
    }
}

impl SchedulingPreferences {
    pub fn from_penalties(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let alpha = positive("alpha", alpha)?;
        let beta = positive("beta", beta)?;
        let gamma = positive("gamma", gamma)?;
        Ok(SchedulingPreferences {
            alpha,
            beta,
            gamma,
            tau: gamma / (beta + gamma),
        })
    }

    /// Derives `γ = βτ/(1 − τ)`.
    pub fn from_punctuality(alpha: f64, beta: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::InvalidPreferences {
                reason: "tau must lie strictly between 0 and 1",
            });
        }
        let gamma = beta * tau / (1.0 - tau);
        let mut p = Self::from_penalties(alpha, beta, gamma)?;
        // keep the caller's τ bit-for-bit; it agrees with γ/(β+γ) to rounding
        p.tau = tau;
        Ok(p)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `1 − τ = β/(β + γ)`, computed without cancellation.
    pub fn upper_tail(&self) -> f64 {
        self.beta / (self.beta + self.gamma)
    }

    /// `γ > β`, equivalently `τ > ½`.
    pub fn is_risk_averse(&self) -> bool {
        self.gamma > self.beta
    }

    /// All three rates multiplied by `lambda`; `τ` is unchanged.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let mut p = Self::from_penalties(self.alpha * lambda, self.beta * lambda, self.gamma * lambda)?;
        p.tau = self.tau;
        Ok(p)
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        let mut p = Self::from_penalties(alpha, self.beta, self.gamma)?;
        p.tau = self.tau;
        Ok(p)
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::from_penalties(self.alpha, beta, self.gamma)
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::from_penalties(self.alpha, self.beta, gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_both_ways() {
        let p = SchedulingPreferences::from_penalties(2.0, 1.0, 4.0).unwrap();
        assert_eq!(p.tau(), 0.8);
        assert!(p.is_risk_averse());
        let q = SchedulingPreferences::from_punctuality(2.0, 1.0, 0.6).unwrap();
        assert!((q.gamma() - 1.5).abs() < 1e-14);
        assert!((q.gamma() / (q.beta() + q.gamma()) - q.tau()).abs() < 1e-12);
        assert!((q.upper_tail() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(SchedulingPreferences::from_penalties(0.0, 1.0, 1.0).is_err());
        assert!(SchedulingPreferences::from_penalties(1.0, f64::NAN, 1.0).is_err());
        assert!(SchedulingPreferences::from_punctuality(1.0, 1.0, 1.0).is_err());
        assert!(SchedulingPreferences::from_punctuality(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn symmetric_penalties_are_not_risk_averse() {
        let p = SchedulingPreferences::from_penalties(1.0, 2.0, 2.0).unwrap();
        assert_eq!(p.tau(), 0.5);
        assert!(!p.is_risk_averse());
    }
}
