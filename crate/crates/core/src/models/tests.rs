use super::*;
use crate::fit::lognormal_from_moments;
use crate::math::{abs, rel_diff};
use crate::quad::integrate;
use alloc::vec::Vec;
use proptest::prelude::*;

fn suite() -> Vec<QuantileModel> {
    let mut v: Vec<QuantileModel> = [0.2, 0.41, 0.64, 0.79, 0.94, 1.10]
        .iter()
        .map(|cov| lognormal_from_moments(10.0, 10.0 * cov).unwrap())
        .collect();
    v.push(QuantileModel::burr(3.0, 2.0, 10.0).unwrap());
    v.push(QuantileModel::burr(1.5, 4.0, 30.0).unwrap());
    v.push(QuantileModel::uniform_with_moments(10.0, 1.0).unwrap());
    v
}

#[test]
fn uniform_partial_expectation() {
    let m = QuantileModel::uniform(0.0, 1.0).unwrap();
    assert!(abs(m.partial_expectation(0.8).unwrap() - 0.18) < 1e-14);
}

#[test]
fn lognormal_partial_expectation_oracle() {
    let m = lognormal_from_moments(9.97, 1.994).unwrap();
    assert!(abs(m.partial_expectation(0.8).unwrap() - 2.591_444_523_066_843) < 1e-12);
    assert!(abs(m.quantile(0.8) - 11.549_553_155_997_803) < 1e-11);
}

#[test]
fn degenerate_partial_expectation() {
    let m = QuantileModel::degenerate(7.0).unwrap();
    assert!(abs(m.partial_expectation(0.3).unwrap() - 4.9) < 1e-14);
}

#[test]
fn probability_guard() {
    let m = QuantileModel::uniform(0.0, 1.0).unwrap();
    for p in [0.0, 1.0, -0.1, f64::NAN] {
        assert!(matches!(m.partial_expectation(p), Err(Error::ProbabilityOutOfRange { .. })));
    }
}

#[test]
fn lognormal_closed_form_matches_quadrature() {
    for cov in [0.2, 0.64, 1.1] {
        let m = lognormal_from_moments(10.0, 10.0 * cov).unwrap();
        for p in [0.5, 0.8, 0.95, 0.99] {
            let closed = m.partial_expectation(p).unwrap();
            let quad = m.tail_integral_quadrature(1.0 - p, QuadOptions::default()).unwrap();
            assert!(rel_diff(closed, quad) < 1e-8, "cov {cov} p {p}: {closed} vs {quad}");
        }
    }
}

#[test]
fn burr_quadrature_matches_incomplete_beta_series() {
    // For c = 1, k = 3, s = 1: ∫_{1−q}^1 F⁻¹ = 1.5·q^{2/3} − q, from
    // F⁻¹(1 − w) = w^{−1/3} − 1.
    let m = QuantileModel::burr(1.0, 3.0, 1.0).unwrap();
    for q in [0.5, 0.2, 0.01, 1e-6] {
        let exact = 1.5 * crate::math::pow(q, 2.0 / 3.0) - q;
        assert!(rel_diff(m.tail_integral(q).unwrap(), exact) < 1e-9);
    }
    assert!(rel_diff(m.mean(), 0.5) < 1e-13);
}

#[test]
fn round_trip_on_grid() {
    for m in suite() {
        for i in 1..100 {
            let p = i as f64 / 100.0;
            assert!(abs(m.cdf(m.quantile(p)) - p) <= 1e-9, "{:?} at {p}", m.kind());
        }
    }
}

#[test]
fn partial_expectation_limits() {
    for m in suite() {
        let near_zero = m.partial_expectation(1e-6).unwrap();
        assert!(rel_diff(near_zero, m.mean()) < 1e-4, "{:?}", m.kind());
        assert!(m.partial_expectation(1.0 - 1e-9).unwrap() < 1e-6 * m.mean());
    }
}

#[test]
fn partial_expectation_dominates_quantile_rectangle() {
    for m in suite() {
        for p in [0.1, 0.5, 0.8, 0.99] {
            assert!(m.partial_expectation(p).unwrap() >= (1.0 - p) * m.quantile(p));
        }
    }
}

#[test]
fn standardized_moments_by_quadrature() {
    let opts = QuadOptions {
        rel_tol: 1e-10,
        ..QuadOptions::default()
    };
    for m in suite() {
        let x = m.standardized().unwrap();
        // upper half in q = 1 − p so that no node rounds onto p = 1
        let moment = |k: i32| {
            integrate(|p| crate::math::pow(x.quantile_x(p), k as f64), 0.0, 0.5, opts).value
                + integrate(|q| crate::math::pow(x.quantile_upper_x(q), k as f64), 0.0, 0.5, opts).value
        };
        let (first, second) = (moment(1), moment(2));
        assert!(abs(first) < 1e-6, "{:?}: {first}", m.kind());
        assert!(abs(second - 1.0) < 1e-5, "{:?}: {second}", m.kind());
    }
}

#[test]
fn degenerate_has_no_standardized_view() {
    assert!(matches!(
        QuantileModel::Degenerate(3.0).standardized(),
        Err(Error::DegenerateVariability)
    ));
}

#[test]
fn expected_excess_matches_tail_integral() {
    for m in suite() {
        for p in [0.3, 0.8, 0.97] {
            let t = m.quantile(p);
            let direct = m.expected_excess(t).unwrap();
            let via = m.partial_expectation(p).unwrap() - (1.0 - p) * t;
            assert!(abs(direct - via) <= 1e-9 * m.mean(), "{:?} at {p}", m.kind());
        }
    }
}

#[test]
fn burr_moment_condition() {
    assert!(matches!(QuantileModel::burr(1.0, 2.0, 1.0), Err(Error::MomentNotFinite { .. })));
    assert!(QuantileModel::burr(1.0, 2.01, 1.0).is_ok());
}

#[test]
fn rescaling_scales_quantiles() {
    for m in suite() {
        let r = m.rescaled(60.0).unwrap();
        assert!(rel_diff(r.quantile(0.77), 60.0 * m.quantile(0.77)) < 1e-13);
        assert!(rel_diff(r.std_dev(), 60.0 * m.std_dev()) < 1e-13);
    }
}

fn arb_model() -> impl Strategy<Value = QuantileModel> {
    prop_oneof![
        (1.0..100.0f64, 0.05..1.2f64).prop_map(|(mean, cov)| lognormal_from_moments(mean, mean * cov).unwrap()),
        (1.0..8.0f64, 0.5..6.0f64, 1.0..50.0f64)
            .prop_filter("finite variance", |(c, k, _)| c * k > 2.2)
            .prop_map(|(c, k, s)| QuantileModel::burr(c, k, s).unwrap()),
        (1.0..50.0f64, 0.1..5.0f64).prop_map(|(lo, w)| QuantileModel::uniform(lo, lo + w).unwrap()),
        proptest::collection::vec(1.0..100.0f64, 2..40).prop_filter_map("distinct", |s| {
            Empirical::new(&s, Interpolation::Linear).ok().map(QuantileModel::Empirical)
        }),
        proptest::collection::vec(1.0..100.0f64, 2..40).prop_filter_map("distinct", |s| {
            Empirical::new(&s, Interpolation::Step).ok().map(QuantileModel::Empirical)
        }),
    ]
}

proptest! {
    #[test]
    fn quantile_is_monotone(m in arb_model(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(m.quantile(lo) <= m.quantile(hi));
    }

    #[test]
    fn partial_expectation_decreases(m in arb_model(), a in 0.01..0.99f64, b in 0.01..0.99f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (pl, ph) = (m.partial_expectation(lo).unwrap(), m.partial_expectation(hi).unwrap());
        prop_assert!(pl >= ph - 1e-12 * pl.abs());
    }

    #[test]
    fn standardized_quantile_is_monotone(m in arb_model(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let x = m.standardized().unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(x.quantile_x(lo) <= x.quantile_x(hi));
    }
}
