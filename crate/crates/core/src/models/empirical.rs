use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, ceil, floor, sqrt};

/// How the empirical quantile function interpolates between order statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Interpolation {
    /// Piecewise linear through `((i − 0.5)/n, x₍ᵢ₎)`, flat beyond the end knots.
    Linear,
    /// Left-continuous inverse of the empirical CDF: `Q(p) = x₍⌈np⌉₎`.
    Step,
}

/// Quantile function built from a sorted sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Empirical {
    sorted: Vec<f64>,
    rule: Interpolation,
    /// `tail[i]` is `∫` of the quantile function from the start of piece `i` to 1.
    tail: Vec<f64>,
    mean: f64,
    std: f64,
}

impl Empirical {
    pub fn new(samples: &[f64], rule: Interpolation) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::TooFewSamples {
                needed: 2,
                got: samples.len(),
            });
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { what: "sample" });
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let nf = n as f64;
        let mean = sorted.iter().sum::<f64>() / nf;

        let mut tail = alloc::vec![0.0; n + 1];
        match rule {
            Interpolation::Step => {
                for i in (0..n).rev() {
                    tail[i] = tail[i + 1] + sorted[i] / nf;
                }
            }
            Interpolation::Linear => {
                // piece i in 0..n-1 spans [p_i, p_{i+1}]; piece n-1 is the flat end
                tail[n - 1] = 0.5 * sorted[n - 1] / nf;
                for i in (0..n - 1).rev() {
                    tail[i] = tail[i + 1] + 0.5 * (sorted[i] + sorted[i + 1]) / nf;
                }
            }
        }

        // Second moment of the quantile function itself, centered for stability.
        let c: Vec<f64> = sorted.iter().map(|x| x - mean).collect();
        let second = match rule {
            Interpolation::Step => c.iter().map(|d| d * d).sum::<f64>() / nf,
            Interpolation::Linear => {
                let ends = 0.5 * (c[0] * c[0] + c[n - 1] * c[n - 1]);
                let mids: f64 = c
                    .windows(2)
                    .map(|w| (w[0] * w[0] + w[0] * w[1] + w[1] * w[1]) / 3.0)
                    .sum();
                (ends + mids) / nf
            }
        };
        // The centered first moment is zero up to rounding; subtract it anyway.
        let first = match rule {
            Interpolation::Step => c.iter().sum::<f64>() / nf,
            Interpolation::Linear => {
                let ends = 0.5 * (c[0] + c[n - 1]);
                let mids: f64 = c.windows(2).map(|w| 0.5 * (w[0] + w[1])).sum();
                (ends + mids) / nf
            }
        };
        let var = (second - first * first).max(0.0);
        Ok(Empirical {
            sorted,
            rule,
            tail,
            mean,
            std: sqrt(var),
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn rule(&self) -> Interpolation {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Standard deviation of the quantile function under the chosen rule
    /// (the population standard deviation for `Step`).
    pub fn std_dev(&self) -> f64 {
        self.std
    }

    fn nf(&self) -> f64 {
        self.sorted.len() as f64
    }

    /// Zero-based index `⌈np⌉ − 1`, snapping `np` to an integer when it is
    /// within rounding of one.
    fn step_index(&self, p: f64) -> usize {
        let np = self.nf() * p;
        let r = floor(np + 0.5);
        let j = if abs(np - r) <= 8.0 * f64::EPSILON * np.max(1.0) {
            r
        } else {
            ceil(np)
        };
        (j as isize - 1).clamp(0, self.sorted.len() as isize - 1) as usize
    }

    /// For `p` strictly between the first and last knot, the segment index
    /// and fractional position.
    fn linear_segment(&self, p: f64) -> (usize, f64) {
        let n = self.sorted.len();
        let u = p * self.nf() - 0.5;
        let i = (floor(u) as usize).min(n - 2);
        (i, u - i as f64)
    }

    fn first_knot(&self) -> f64 {
        0.5 / self.nf()
    }

    fn last_knot(&self) -> f64 {
        1.0 - 0.5 / self.nf()
    }

    pub fn quantile(&self, p: f64) -> f64 {
        let x = &self.sorted;
        match self.rule {
            Interpolation::Step => x[self.step_index(p)],
            Interpolation::Linear => {
                if p <= self.first_knot() {
                    x[0]
                } else if p >= self.last_knot() {
                    x[x.len() - 1]
                } else {
                    let (i, frac) = self.linear_segment(p);
                    x[i] + frac * (x[i + 1] - x[i])
                }
            }
        }
    }

    /// Right-continuous CDF of the distribution whose quantile function this is.
    pub fn cdf(&self, t: f64) -> f64 {
        let x = &self.sorted;
        let n = x.len();
        let m = x.partition_point(|&v| v <= t);
        match self.rule {
            Interpolation::Step => m as f64 / self.nf(),
            Interpolation::Linear => {
                if m == 0 {
                    0.0
                } else if m == n {
                    1.0
                } else {
                    let (lo, hi) = (x[m - 1], x[m]);
                    ((m as f64 - 0.5) + (t - lo) / (hi - lo)) / self.nf()
                }
            }
        }
    }

    /// Density of the absolutely continuous part (zero for `Step`).
    pub fn pdf(&self, t: f64) -> f64 {
        let x = &self.sorted;
        match self.rule {
            Interpolation::Step => 0.0,
            Interpolation::Linear => {
                let m = x.partition_point(|&v| v <= t);
                if m == 0 || m == x.len() {
                    0.0
                } else {
                    1.0 / (self.nf() * (x[m] - x[m - 1]))
                }
            }
        }
    }

    /// Exact `∫_p^1 Q(x) dx` as a finite sum.
    pub fn partial_expectation(&self, p: f64) -> f64 {
        let x = &self.sorted;
        let n = x.len();
        let nf = self.nf();
        match self.rule {
            Interpolation::Step => {
                let j = self.step_index(p);
                x[j] * ((j + 1) as f64 / nf - p).max(0.0) + self.tail[j + 1]
            }
            Interpolation::Linear => {
                if p <= self.first_knot() {
                    x[0] * (self.first_knot() - p) + self.tail[0]
                } else if p >= self.last_knot() {
                    x[n - 1] * (1.0 - p)
                } else {
                    let (i, frac) = self.linear_segment(p);
                    let v = x[i] + frac * (x[i + 1] - x[i]);
                    let next_knot = (i as f64 + 1.5) / nf;
                    0.5 * (v + x[i + 1]) * (next_knot - p) + self.tail[i + 1]
                }
            }
        }
    }

    pub(crate) fn rescaled(&self, factor: f64) -> Self {
        Empirical {
            sorted: self.sorted.iter().map(|x| x * factor).collect(),
            rule: self.rule,
            tail: self.tail.iter().map(|x| x * factor).collect(),
            mean: self.mean * factor,
            std: self.std * factor,
        }
    }
}
