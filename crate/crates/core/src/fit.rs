//! Model construction from moments and samples.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, exp, ln, softplus, sqrt};
use crate::models::{BurrXii, Empirical, Interpolation, Lognormal, QuantileModel};
use crate::optim::{nelder_mead, NelderMeadOptions};

fn check_finite(samples: &[f64]) -> Result<()> {
    if samples.iter().any(|x| !x.is_finite()) {
        Err(Error::NonFinite { what: "sample" })
    } else {
        Ok(())
    }
}

fn check_positive(samples: &[f64]) -> Result<()> {
    check_finite(samples)?;
    match samples.iter().position(|&x| x <= 0.0) {
        Some(index) => Err(Error::NonPositiveSample {
            index,
            value: samples[index],
        }),
        None => Ok(()),
    }
}

fn all_equal(samples: &[f64]) -> bool {
    samples.iter().all(|&x| x == samples[0])
}

/// Lognormal with the given mean and standard deviation (`std = 0` gives
/// [`QuantileModel::Degenerate`]).
pub fn lognormal_from_moments(mean: f64, std: f64) -> Result<QuantileModel> {
    if !mean.is_finite() {
        return Err(Error::NonFinite { what: "mean" });
    }
    if !std.is_finite() {
        return Err(Error::NonFinite { what: "std" });
    }
    if mean <= 0.0 {
        return Err(Error::NonPositiveMean { mean });
    }
    if std < 0.0 {
        return Err(Error::InvalidParameter {
            name: "std",
            value: std,
        });
    }
    if std == 0.0 {
        return Ok(QuantileModel::Degenerate(mean));
    }
    Lognormal::from_moments(mean, std).map(QuantileModel::Lognormal)
}

/// Maximum-likelihood lognormal: `ξ` and `ψ` are the mean and population
/// standard deviation of the log samples.
pub fn fit_lognormal_mle(samples: &[f64]) -> Result<QuantileModel> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    check_positive(samples)?;
    if all_equal(samples) {
        return Ok(QuantileModel::Degenerate(samples[0]));
    }
    let n = samples.len() as f64;
    let logs: Vec<f64> = samples.iter().map(|&x| ln(x)).collect();
    let xi = logs.iter().sum::<f64>() / n;
    let var = logs.iter().map(|l| (l - xi) * (l - xi)).sum::<f64>() / n;
    if var == 0.0 {
        return Ok(QuantileModel::Degenerate(samples[0]));
    }
    QuantileModel::lognormal(xi, sqrt(var))
}

/// Search box for the Burr shape `c` and the median-relative scale.
const C_RANGE: (f64, f64) = (0.05, 200.0);
const SCALE_RANGE: (f64, f64) = (1e-4, 1e4);

/// Maximum-likelihood Burr XII fit.
///
/// Data are divided by their median. For fixed `(c, s)` the likelihood is
/// maximized in closed form by `k = n / Σ ln(1 + (y/s)^c)`, leaving a
/// two-dimensional search over `(ln c, ln s)` done by Nelder–Mead from the
/// best few points of a seed grid.
pub fn fit_burr(samples: &[f64]) -> Result<QuantileModel> {
    if samples.len() < 10 {
        return Err(Error::TooFewSamples {
            needed: 10,
            got: samples.len(),
        });
    }
    check_positive(samples)?;
    if all_equal(samples) {
        return Ok(QuantileModel::Degenerate(samples[0]));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let n = samples.len() as f64;
    let logs: Vec<f64> = samples.iter().map(|&x| ln(x / median)).collect();
    let sum_logs: f64 = logs.iter().sum();

    let profile_k = |c: f64, ln_s: f64| -> f64 {
        let l: f64 = logs.iter().map(|&ly| softplus(c * (ly - ln_s))).sum();
        n / l
    };
    // Negative profile log-likelihood in (ln c, ln s).
    let objective = |p: &[f64; 2]| -> f64 {
        let (lc, ls) = (p[0], p[1]);
        if lc < ln(C_RANGE.0) || lc > ln(C_RANGE.1) || ls < ln(SCALE_RANGE.0) || ls > ln(SCALE_RANGE.1) {
            return f64::INFINITY;
        }
        let c = exp(lc);
        let l: f64 = logs.iter().map(|&ly| softplus(c * (ly - ls))).sum();
        let k = n / l;
        let ll = n * (lc + ln(k)) - n * ls + (c - 1.0) * (sum_logs - n * ls) - n - l;
        -ll
    };

    let mut seeds: Vec<([f64; 2], f64)> = Vec::new();
    for &c in &[0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        for &s in &[0.25, 0.5, 1.0, 2.0, 4.0] {
            let p = [ln(c), ln(s)];
            seeds.push((p, objective(&p)));
        }
    }
    seeds.sort_by(|a, b| a.1.total_cmp(&b.1));

    let opts = NelderMeadOptions {
        max_iter: 4_000,
        f_tol: 1e-13,
        x_tol: 1e-8,
    };
    let mut best: Option<crate::optim::Minimum<2>> = None;
    let mut iterations = 0;
    for (start, _) in seeds.iter().take(3) {
        let m = nelder_mead(objective, *start, [0.3, 0.3], opts);
        iterations += m.iterations;
        if m.converged && best.is_none_or(|b| m.value < b.value) {
            best = Some(m);
        }
    }
    let best = best.ok_or(Error::ConvergenceFailure { iterations })?;
    let c = exp(best.x[0]);
    let k = profile_k(c, best.x[1]);
    let scale = exp(best.x[1]) * median;
    BurrXii::new(c, k, scale).map(QuantileModel::BurrXii)
}

/// Empirical quantile model; a constant sample gives
/// [`QuantileModel::Degenerate`].
pub fn empirical_from_samples(samples: &[f64], rule: Interpolation) -> Result<QuantileModel> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    check_finite(samples)?;
    if all_equal(samples) {
        return Ok(QuantileModel::Degenerate(samples[0]));
    }
    Empirical::new(samples, rule).map(QuantileModel::Empirical)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSummary {
    pub n: usize,
    pub mean: f64,
    /// Unbiased (n − 1) standard deviation.
    pub std: f64,
    /// `None` when the sample has zero variance.
    pub skewness: Option<f64>,
    /// Excess kurtosis; `None` when the sample has zero variance.
    pub kurtosis: Option<f64>,
}

impl SampleSummary {
    /// Skewness and excess kurtosis, or [`Error::ZeroVariance`].
    pub fn higher_moments(&self) -> Result<(f64, f64)> {
        match (self.skewness, self.kurtosis) {
            (Some(s), Some(k)) => Ok((s, k)),
            _ => Err(Error::ZeroVariance),
        }
    }
}

/// Mean, unbiased standard deviation, and the moment-ratio skewness and
/// excess kurtosis `m₃/m₂^{3/2}`, `m₄/m₂² − 3`.
pub fn summary_stats(samples: &[f64]) -> Result<SampleSummary> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    check_finite(samples)?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in samples {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let std = sqrt(m2 / (n - 1.0));
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    let (skewness, kurtosis) = if m2 > 0.0 {
        (Some(m3 / (m2 * sqrt(m2))), Some(m4 / (m2 * m2) - 3.0))
    } else {
        (None, None)
    };
    Ok(SampleSummary {
        n: samples.len(),
        mean,
        std,
        skewness,
        kurtosis,
    })
}

/// Kolmogorov–Smirnov distance between the sample's ECDF and the model CDF.
pub fn ks_statistic(samples: &[f64], model: &QuantileModel) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    check_finite(samples)?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = model.cdf(x);
        d = d.max(abs(f - i as f64 / n)).max(abs((i + 1) as f64 / n - f));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::rel_diff;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn draws(model: &QuantileModel, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| model.sample(&mut rng)).collect()
    }

    #[test]
    fn moment_inversion() {
        let QuantileModel::Lognormal(m) = lognormal_from_moments(9.97, 1.994).unwrap() else {
            panic!()
        };
        assert!(abs(m.xi() - 2.279_970_227_397_106) < 1e-12);
        assert!(abs(m.psi() - 0.198_042_200_435_365) < 1e-12);
        assert!(rel_diff(m.mean(), 9.97) < 1e-12 && rel_diff(m.std_dev(), 1.994) < 1e-12);

        let QuantileModel::Lognormal(m) = lognormal_from_moments(52.60, 13.51).unwrap() else {
            panic!()
        };
        assert!(abs(m.xi() - 3.930_774_046_660_107) < 1e-12);
        assert!(abs(m.psi() - 0.252_753_132_853_215) < 1e-12);
        assert!(rel_diff(m.mean(), 52.60) < 1e-12 && rel_diff(m.std_dev(), 13.51) < 1e-12);

        assert_eq!(lognormal_from_moments(1.0, 0.0).unwrap(), QuantileModel::Degenerate(1.0));
        assert!(matches!(lognormal_from_moments(0.0, 1.0), Err(Error::NonPositiveMean { .. })));
        assert!(matches!(lognormal_from_moments(f64::NAN, 1.0), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn lognormal_mle_small_cases() {
        let e = core::f64::consts::E;
        assert_eq!(fit_lognormal_mle(&[e, e, e]).unwrap(), QuantileModel::Degenerate(e));
        let QuantileModel::Lognormal(m) = fit_lognormal_mle(&[1.0, e * e]).unwrap() else {
            panic!()
        };
        assert!(abs(m.xi() - 1.0) < 1e-15 && abs(m.psi() - 1.0) < 1e-15);
        assert!(matches!(fit_lognormal_mle(&[1.0]), Err(Error::TooFewSamples { .. })));
        assert!(matches!(
            fit_lognormal_mle(&[1.0, -2.0]),
            Err(Error::NonPositiveSample { index: 1, .. })
        ));
    }

    #[test]
    fn lognormal_mle_recovers_parameters() {
        let truth = QuantileModel::lognormal(2.28, 0.198).unwrap();
        let QuantileModel::Lognormal(m) = fit_lognormal_mle(&draws(&truth, 100_000, 7)).unwrap() else {
            panic!()
        };
        assert!(abs(m.xi() - 2.28) < 0.01 && abs(m.psi() - 0.198) < 0.01);
    }

    #[test]
    fn burr_recovers_parameters() {
        let truth = QuantileModel::burr(3.0, 2.0, 10.0).unwrap();
        let QuantileModel::BurrXii(b) = fit_burr(&draws(&truth, 100_000, 11)).unwrap() else {
            panic!()
        };
        assert!(rel_diff(b.c(), 3.0) < 0.05, "c = {}", b.c());
        assert!(rel_diff(b.k(), 2.0) < 0.05, "k = {}", b.k());
        assert!(rel_diff(b.scale(), 10.0) < 0.05, "s = {}", b.scale());
    }

    #[test]
    fn burr_degenerate_and_small_inputs() {
        assert_eq!(fit_burr(&[4.0; 12]).unwrap(), QuantileModel::Degenerate(4.0));
        assert!(matches!(fit_burr(&[1.0; 9]), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn burr_fit_to_lognormal_data_matches_upper_quantile() {
        let truth = QuantileModel::lognormal(2.28, 0.198).unwrap();
        let fit = fit_burr(&draws(&truth, 20_000, 3)).unwrap();
        assert!(rel_diff(fit.quantile(0.8), truth.quantile(0.8)) < 0.02);
    }

    #[test]
    fn empirical_constant_sample_is_degenerate() {
        let m = empirical_from_samples(&[5.0, 5.0], Interpolation::Step).unwrap();
        assert_eq!(m.quantile(0.3), 5.0);
        assert_eq!(m.std_dev(), 0.0);
    }

    #[test]
    fn summary_two_point_and_constant() {
        let s = summary_stats(&[0.0, 2.0]).unwrap();
        assert_eq!(s.mean, 1.0);
        assert!(abs(s.std - sqrt(2.0)) < 1e-15);
        let c = summary_stats(&[1.0; 4]).unwrap();
        assert_eq!((c.mean, c.std), (1.0, 0.0));
        assert_eq!(c.higher_moments(), Err(Error::ZeroVariance));
    }

    #[test]
    fn summary_matches_generating_moments() {
        let m = QuantileModel::lognormal(3.930_775, 0.252_749).unwrap();
        let s = summary_stats(&draws(&m, 1_000_000, 5)).unwrap();
        assert!(abs(s.mean - 52.60) < 0.1, "{}", s.mean);
        assert!(abs(s.std - 13.51) < 0.1, "{}", s.std);
    }

    #[test]
    fn ks_is_small_for_true_model() {
        let m = QuantileModel::lognormal(0.0, 0.5).unwrap();
        let d = ks_statistic(&draws(&m, 10_000, 1), &m).unwrap();
        assert!(d < 0.02);
    }
}
