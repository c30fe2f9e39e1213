use crate::error::{Error, Result};
use crate::math::{exp, expm1, ln, ln_gamma, log1p, pow, sqrt};
use crate::quad::{integrate_to_infinity, QuadOptions};

/// Burr type XII: `F(t) = 1 − (1 + (t/s)^c)^(−k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurrXii {
    c: f64,
    k: f64,
    scale: f64,
    mean: f64,
    std: f64,
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln(eˣ − 1)` for `x > 0` without overflow.
fn ln_expm1(x: f64) -> f64 {
    if x > 30.0 {
        x + log1p(-exp(-x))
    } else {
        ln(expm1(x))
    }
}

impl BurrXii {
    /// Requires `c·k > 2` so that the mean and variance exist.
    pub fn new(c: f64, k: f64, scale: f64) -> Result<Self> {
        for (name, v) in [("c", c), ("k", k), ("scale", scale)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter { name, value: v });
            }
        }
        if c * k <= 2.0 {
            return Err(Error::MomentNotFinite { c, k });
        }
        // E[T^r] = s^r · k · B(k − r/c, 1 + r/c)
        let m1 = scale * k * exp(ln_beta(k - 1.0 / c, 1.0 + 1.0 / c));
        let m2 = scale * scale * k * exp(ln_beta(k - 2.0 / c, 1.0 + 2.0 / c));
        let var = m2 - m1 * m1;
        if !(var > 0.0) || !m1.is_finite() {
            return Err(Error::MomentNotFinite { c, k });
        }
        Ok(BurrXii {
            c,
            k,
            scale,
            mean: m1,
            std: sqrt(var),
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std_dev(&self) -> f64 {
        self.std
    }

    /// `ln(1 + (t/s)^c)`.
    fn log_base(&self, t: f64) -> f64 {
        let w = self.c * ln(t / self.scale);
        crate::math::softplus(w)
    }

    pub fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        self.scale * pow(expm1(-log1p(-p) / self.k), 1.0 / self.c)
    }

    pub fn quantile_upper(&self, q: f64) -> f64 {
        if q >= 1.0 {
            return 0.0;
        }
        self.scale * pow(expm1(-ln(q) / self.k), 1.0 / self.c)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            -expm1(-self.k * self.log_base(t))
        }
    }

    pub fn sf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            1.0
        } else {
            exp(-self.k * self.log_base(t))
        }
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let r = t / self.scale;
        let lb = self.log_base(t);
        self.c * self.k / self.scale * exp((self.c - 1.0) * ln(r) - (self.k + 1.0) * lb)
    }

    /// `∫_{1−q}^1 F⁻¹` by quadrature in `u = −ln(1 − x)` on `[−ln q, ∞)`.
    pub fn tail_integral(&self, q: f64, opts: QuadOptions) -> Result<f64> {
        if q <= 0.0 {
            return Ok(0.0);
        }
        let u0 = -ln(q);
        let (c, k, s) = (self.c, self.k, self.scale);
        let integrand = |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            s * exp(ln_expm1(u / k) / c - u)
        };
        let r = integrate_to_infinity(integrand, u0, opts);
        if !r.converged || !r.value.is_finite() {
            return Err(Error::TailDivergence {
                abs_error: r.abs_error,
            });
        }
        Ok(r.value)
    }

    pub(crate) fn rescaled(&self, factor: f64) -> Self {
        BurrXii {
            c: self.c,
            k: self.k,
            scale: self.scale * factor,
            mean: self.mean * factor,
            std: self.std * factor,
        }
    }
}
