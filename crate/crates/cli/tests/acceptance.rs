//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ttvar_core::benchmarks::{
    condition_grid, dataset, six_path_preferences, six_path_routes, SIX_PATHS, THIRTEEN_DATASETS, TRADEOFF_101_1,
};
use ttvar_core::fit::{empirical_from_samples, fit_burr, lognormal_from_moments};
use ttvar_core::measures::{departure_mett, reliability_premium};
use ttvar_core::scenarios::{compare_routes, tradeoff_table, trip_cost, Scenario};
use ttvar_core::verify::{check_derivative_signs, condition_sweep, monte_carlo_audit, DerivativeTarget};
use ttvar_core::{Error, Interpolation, QuantileModel, RiskMeasures, SchedulingPreferences, ValuationReport};

type Case<'a> = (Vec<&'a str>, Vec<(&'a str, &'a str)>);
type Criterion = (&'static str, u64, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn prefs(a: f64, b: f64, g: f64) -> SchedulingPreferences {
    SchedulingPreferences::from_penalties(a, b, g).unwrap()
}

fn uniform() -> QuantileModel {
    QuantileModel::uniform_with_moments(10.0, 1.0).unwrap()
}

// 1. exact identities across a mixed suite
fn identities() -> Verdict {
    let sample = dataset("101_1").unwrap().synthetic_sample(5000, 3).unwrap();
    let mut models: Vec<(String, QuantileModel, bool)> = vec![("uniform".into(), uniform(), true)];
    for cov in [0.2, 0.41, 0.64, 0.79, 0.94, 1.1] {
        models.push((format!("logn cov {cov}"), lognormal_from_moments(10.0, 10.0 * cov).unwrap(), false));
    }
    models.push(("burr 3/1.5/10".into(), QuantileModel::burr(3.0, 1.5, 10.0).unwrap(), true));
    models.push(("burr 2/3/5".into(), QuantileModel::burr(2.0, 3.0, 5.0).unwrap(), true));
    models.push(("empirical linear".into(), empirical_from_samples(&sample, Interpolation::Linear).unwrap(), false));
    models.push(("empirical step".into(), empirical_from_samples(&sample, Interpolation::Step).unwrap(), false));
    let pref_sets = [prefs(2.0, 1.0, 4.0), prefs(2.0, 0.8, 3.2)];

    let mut pairs = 0;
    let mut failures = Vec::new();
    for (name, m, quadrature) in &models {
        let tol = if *quadrature { 1e-8 } else { 1e-9 };
        for p in &pref_sets {
            pairs += 1;
            let r = ValuationReport::compute(m, p).unwrap();
            let ms = &r.measures;
            let q = p.upper_tail();
            let premium = reliability_premium(m, p, -ms.ttb).unwrap();
            let mett = departure_mett(m, p).unwrap();
            let am = p.alpha() * ms.mean;
            let checks = [
                ("delta_eed*(1-tau) = S_u", rel(ms.delta_eed * q, ms.s_u) <= tol),
                ("beta*delta_eed = alpha*premium", rel(p.beta() * ms.delta_eed, p.alpha() * premium) <= tol),
                ("|EU_mett| >= |EU_ttb| >= alpha*mu", r.cost_mett >= r.cost_ttb * (1.0 - tol) && r.cost_ttb >= am * (1.0 - tol)),
                ("mett cost paths agree", rel(mett.cost, r.cost_mett) <= tol),
                ("zeta_ett = zeta_ttm + zeta_eed", rel(ms.zeta_ett, ms.zeta_ttm + ms.zeta_eed) <= tol),
                ("vov decomposition", r.residuals.decomposition <= tol),
                ("kappa + 1 = zeta_ett/zeta_ttm", rel(r.kappa + 1.0, ms.zeta_ett / ms.zeta_ttm) <= tol),
                ("ttvr >= beta/alpha", r.ttvr >= p.beta() / p.alpha() * (1.0 - tol)),
                ("l > 1", r.ell > 1.0),
            ];
            for (what, ok) in checks {
                if !ok {
                    failures.push(format!("{name} tau={}: {what}", p.tau()));
                }
            }
        }
    }
    // degenerate guard: measures collapse, valuation refuses
    for v in [5.0, 12.0] {
        pairs += 1;
        let d = QuantileModel::Degenerate(v);
        let p = prefs(2.0, 1.0, 4.0);
        let ms = RiskMeasures::compute(&d, &p).unwrap();
        if ms.s_u != 0.0 || ms.delta_eed != 0.0 || ms.ttb != v {
            failures.push(format!("degenerate {v}: measures not collapsed"));
        }
        if ValuationReport::compute(&d, &p) != Err(Error::DegenerateVariability) {
            failures.push(format!("degenerate {v}: valuation not refused"));
        }
    }
    Verdict {
        pass: pairs >= 20 && failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{pairs} (model, prefs) pairs, all identities hold")
        } else {
            format!("{pairs} pairs; failures: {}", failures.join("; "))
        },
    }
}

// 2. hand-integrable uniform point
fn uniform_point() -> Verdict {
    let r = ValuationReport::compute(&uniform(), &prefs(2.0, 1.0, 4.0)).unwrap();
    let got = [
        ("VOR", r.vor, 4.0 / 3.0),
        ("VOU", r.vou, 0.25),
        ("VOV", r.vov, 1.0625),
        ("ttvr", r.ttvr, 0.53125),
        ("kappa+1", r.kappa + 1.0, 4.0 / 3.0),
        ("l", r.ell, 1.125),
        ("|EU_ttb|", r.cost_ttb, 21.385641),
        ("|EU_mett|", r.cost_mett, 21.472243),
    ];
    let worst = got.iter().map(|(_, a, b)| (a - b).abs()).fold(0.0, f64::max);
    let off: Vec<String> = got
        .iter()
        .filter(|(_, a, b)| (a - b).abs() > 1e-6)
        .map(|(n, a, b)| format!("{n} {a} vs {b}"))
        .collect();
    Verdict {
        pass: off.is_empty(),
        detail: if off.is_empty() { format!("max abs error {worst:.2e}") } else { off.join("; ") },
    }
}

// 3. six-path cost table and rankings
fn six_paths() -> Verdict {
    let cmp = compare_routes(&six_path_routes().unwrap(), &six_path_preferences()).unwrap();
    let mut worst: f64 = 0.0;
    let mut off = Vec::new();
    for (r, published) in cmp.routes.iter().zip(SIX_PATHS.iter()) {
        let c = r.costs.as_ref().unwrap();
        for (what, a, b) in [
            ("reliability", c.mett.reliability, published.reliability),
            ("unreliability", c.mett.unreliability, published.unreliability),
        ] {
            let e = (a - b).abs() / b;
            worst = worst.max(e);
            if e > 0.02 {
                off.push(format!("{} {what} {a:.3} vs {b}", r.name));
            }
        }
    }
    let ranks = [
        ("scenario 1 argmin", cmp.best(Scenario::Mean), "Path 5"),
        ("scenario 2 argmin", cmp.best(Scenario::Ttb), "Path 4"),
        ("scenario 3 argmax", cmp.worst(Scenario::Mett), "Path 6"),
    ];
    for (what, got, want) in ranks {
        if got != Some(want) {
            off.push(format!("{what} {got:?} vs {want}"));
        }
    }
    Verdict {
        pass: off.is_empty(),
        detail: if off.is_empty() {
            format!("max relative cost error {:.2}%, rankings match", 100.0 * worst)
        } else {
            off.join("; ")
        },
    }
}

// 4. unreliability share of the METT cost
fn unreliability_shares() -> Verdict {
    let p = six_path_preferences();
    let shares: Vec<f64> = six_path_routes()
        .unwrap()
        .iter()
        .map(|(_, m)| trip_cost(m, &p, Scenario::Mett).unwrap().percents[2])
        .collect();
    let monotone = shares.windows(2).all(|w| w[1] > w[0]);
    let first_ok = (shares[0] - 0.0196).abs() <= 0.002;
    let last_ok = (shares[5] - 0.107).abs() <= 0.005;
    Verdict {
        pass: monotone && first_ok && last_ok,
        detail: format!(
            "shares {:?}; monotone {monotone}; path 1 {:.4} (want 0.0196 +/- 0.002) {}; path 6 {:.4} (want 0.107 +/- 0.005) {}",
            shares.iter().map(|s| (s * 1e4).round() / 1e4).collect::<Vec<_>>(),
            shares[0],
            if first_ok { "ok" } else { "OUT" },
            shares[5],
            if last_ok { "ok" } else { "OUT" },
        ),
    }
}

// 5. valid-condition sweep on the thirteen datasets
fn condition_sweeps() -> Verdict {
    let grid = condition_grid();
    let mut models = Vec::new();
    for d in THIRTEEN_DATASETS.iter() {
        models.push((format!("{} logn", d.name), d.lognormal().unwrap()));
        let sample = d.synthetic_sample(50_000, 17).unwrap();
        models.push((format!("{} burr", d.name), fit_burr(&sample[..5_000]).unwrap()));
        models.push((format!("{} empirical", d.name), empirical_from_samples(&sample, Interpolation::Linear).unwrap()));
    }
    let just: Vec<QuantileModel> = models.iter().map(|m| m.1.clone()).collect();
    let sweeps = condition_sweep(&just, &grid).unwrap();
    let (mut inside, mut outside, mut min_ratio) = (0, 0, f64::INFINITY);
    let mut bad = Vec::new();
    for ((name, _), s) in models.iter().zip(&sweeps) {
        match s {
            Ok(s) => {
                inside += s.in_domain();
                outside += s.outside_domain();
                for p in &s.points {
                    if let Some(r) = p.ratio {
                        min_ratio = min_ratio.min(r);
                        if r < 1.0 {
                            bad.push(format!("{name} tau={} ratio {r}", p.tau));
                        }
                    }
                }
            }
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    Verdict {
        pass: bad.is_empty(),
        detail: format!(
            "{} models x {} taus: {inside} in-domain points, min ratio {min_ratio:.4}; {outside} points with F^-1(tau) <= 0 have no ratio{}",
            models.len(),
            grid.len(),
            if bad.is_empty() { String::new() } else { format!("; violations: {}", bad.join("; ")) }
        ),
    }
}

// 6. trade-off table against the published rows
fn tradeoff() -> Verdict {
    let m = lognormal_from_moments(52.60, 13.51).unwrap();
    let grid: Vec<f64> = TRADEOFF_101_1.iter().map(|r| r.tau).collect();
    let rows = tradeoff_table(&m, 2.0, 1.0, &grid).unwrap();
    let ett_err = rel(rows[0].ett, 12.35);
    let ttvr_err = rel(rows[0].ttvr, 0.6889);
    let within = (rows[0].ett - 12.35).abs() <= 0.1 * 12.35 && (rows[0].ttvr - 0.6889).abs() <= 0.1 * 0.6889;
    let ett_up = rows.windows(2).all(|w| w[1].ett > w[0].ett);
    let ttvr_down = rows.windows(2).all(|w| w[1].ttvr < w[0].ttvr);
    let published_up = TRADEOFF_101_1.windows(2).all(|w| w[1].ett > w[0].ett);
    let published_down = TRADEOFF_101_1.windows(2).all(|w| w[1].ttvr < w[0].ttvr);
    Verdict {
        pass: within && ett_up && ttvr_down && published_up && published_down,
        detail: format!(
            "tau=0.60: ETT {:.4} ({:.1}% off), ttvr {:.5} ({:.1}% off); ETT increasing {ett_up}, ttvr decreasing {ttvr_down}",
            rows[0].ett,
            100.0 * ett_err,
            rows[0].ttvr,
            100.0 * ttvr_err
        ),
    }
}

// 7. derivative signs and the closed form for dVOV/dgamma
fn derivative_signs() -> Verdict {
    let mut suite: Vec<(String, QuantileModel)> = vec![("uniform".into(), uniform())];
    for cov in [0.2, 0.41, 0.64, 0.79, 0.94, 1.1] {
        suite.push((format!("logn cov {cov}"), lognormal_from_moments(10.0, 10.0 * cov).unwrap()));
    }
    suite.push(("burr 3/1.5/10".into(), QuantileModel::burr(3.0, 1.5, 10.0).unwrap()));
    let mut checks = 0;
    let mut bad = Vec::new();
    for (name, m) in &suite {
        for p in [prefs(2.0, 1.0, 4.0), prefs(2.0, 0.8, 3.2)] {
            match check_derivative_signs(m, &p, 1e-4) {
                Ok(cs) => {
                    for c in cs {
                        checks += 1;
                        if !c.pass || c.closed_form_match == Some(false) {
                            bad.push(format!("{name} tau={} {}", p.tau(), c.target.as_str()));
                        }
                    }
                }
                Err(e) => bad.push(format!("{name}: {e}")),
            }
        }
    }
    let uni = check_derivative_signs(&uniform(), &prefs(2.0, 1.0, 4.0), 1e-4).unwrap();
    let vg = uni.iter().find(|c| c.target == DerivativeTarget::VovWrtGamma).unwrap();
    let hand = -0.015625;
    let closed = vg.closed_form.unwrap();
    let hand_ok = (closed - hand).abs() <= 1e-12 && rel(vg.extrapolated, hand) <= 1e-5;
    Verdict {
        pass: bad.is_empty() && hand_ok,
        detail: format!(
            "{checks} sign checks over {} cases; uniform dVOV/dgamma closed {closed}, finite difference {:.9}{}",
            2 * suite.len(),
            vg.extrapolated,
            if bad.is_empty() { String::new() } else { format!("; failures: {}", bad.join("; ")) }
        ),
    }
}

// 8. Monte Carlo agreement with the analytic measures
fn monte_carlo() -> Verdict {
    let sample = dataset("101_1").unwrap().synthetic_sample(5000, 8).unwrap();
    let models = [
        ("logn 9.97/1.994", lognormal_from_moments(9.97, 1.994).unwrap(), 42),
        ("uniform", uniform(), 1),
        ("burr 3/1.5/10", QuantileModel::burr(3.0, 1.5, 10.0).unwrap(), 2),
        ("empirical 101_1", empirical_from_samples(&sample, Interpolation::Linear).unwrap(), 3),
        ("logn Link2", dataset("Link2").unwrap().lognormal().unwrap(), 4),
    ];
    let p = prefs(2.0, 1.0, 4.0);
    let mut bad = Vec::new();
    let mut worst_z: f64 = 0.0;
    for (name, m, seed) in &models {
        let a = monte_carlo_audit(m, &p, 1_000_000, *seed).unwrap();
        let b = monte_carlo_audit(m, &p, 1_000_000, *seed).unwrap();
        if a != b {
            bad.push(format!("{name}: rerun differs"));
        }
        for e in &a.estimates {
            if e.std_error > 0.0 {
                worst_z = worst_z.max((e.estimate - e.analytic).abs() / e.std_error);
            }
            if !e.pass {
                bad.push(format!("{name} {}: {} vs {} (se {})", e.quantity.as_str(), e.estimate, e.analytic, e.std_error));
            }
        }
    }
    Verdict {
        pass: bad.is_empty(),
        detail: format!(
            "5 models x 1e6 draws, largest deviation {worst_z:.2} standard errors, reruns identical{}",
            if bad.is_empty() { String::new() } else { format!("; failures: {}", bad.join("; ")) }
        ),
    }
}

// 9. CLI golden files, reruns and exit codes
fn cli_contracts() -> Verdict {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let run = |args: &[&str], out: &Path| {
        Command::new(env!("CARGO_BIN_EXE_ttvar")).args(args).arg("--out").arg(out).output().unwrap()
    };
    let mut routes = vec!["routes", "--alpha", "2", "--beta", "0.8", "--gamma", "3.2", "--format", "both"];
    let specs: Vec<String> = (1..=6).map(|i| format!("builtin:route:{i}")).collect();
    for s in &specs {
        routes.extend(["--model", s.as_str()]);
    }
    let cases: Vec<Case> = vec![
        (
            vec!["value", "--alpha", "2", "--beta", "1", "--gamma", "4", "--model", "builtin:uniform"],
            vec![("value.json", "value_uniform.json")],
        ),
        (
            routes,
            vec![
                ("routes.json", "routes_six_paths.json"),
                ("routes.csv", "routes_six_paths.csv"),
                ("fig6_decomposition.csv", "fig6_decomposition.csv"),
            ],
        ),
        (
            vec!["tradeoff", "--alpha", "2", "--beta", "1", "--grid", "0.60:0.90:0.05", "--model", "builtin:dataset:101_1"],
            vec![("tradeoff.json", "tradeoff_101_1.json"), ("fig8_tradeoff.csv", "fig8_tradeoff.csv")],
        ),
        (
            vec!["verify", "--model", "builtin:uniform"],
            vec![("verify.json", "verify_uniform.json"), ("fig7_condition.csv", "fig7_uniform.csv")],
        ),
    ];
    let mut bad = Vec::new();
    for (args, files) in &cases {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let (oa, ob) = (run(args, a.path()), run(args, b.path()));
        if oa.status.code() != Some(0) || ob.status.code() != Some(0) {
            bad.push(format!("{} exited {:?}", args[0], oa.status.code()));
            continue;
        }
        for (file, gold) in files {
            let x = fs::read(a.path().join(file)).unwrap_or_default();
            let y = fs::read(b.path().join(file)).unwrap_or_default();
            if x != y {
                bad.push(format!("{file} differs between runs"));
            }
            if fs::read(golden.join(gold)).ok().as_deref() != Some(&x[..]) {
                bad.push(format!("{file} differs from golden {gold}"));
            }
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let codes = [
        (vec!["value", "--alpha", "2", "--beta", "1", "--gamma", "4", "--model", "builtin:uniform"], 0),
        (vec!["value", "--alpha", "2", "--beta", "1", "--gamma", "4", "--tau", "0.8", "--model", "builtin:uniform"], 2),
        (vec!["value", "--alpha", "2", "--beta", "1", "--gamma", "4", "--model", "builtin:degenerate:10"], 3),
    ];
    for (args, want) in &codes {
        let got = run(args, dir.path()).status.code();
        if got != Some(*want) {
            bad.push(format!("exit {got:?}, expected {want}"));
        }
    }
    Verdict {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "4 commands match golden files and rerun byte-identically; exit codes 0/2/3".into()
        } else {
            bad.join("; ")
        },
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("exact identities", 5, identities),
        ("uniform closed-form point", 1, uniform_point),
        ("six-path cost reproduction", 5, six_paths),
        ("unreliability share trend", 5, unreliability_shares),
        ("valid-condition sweep", 10, condition_sweeps),
        ("trade-off table", 2, tradeoff),
        ("derivative signs", 10, derivative_signs),
        ("Monte Carlo audits", 60, monte_carlo),
        ("CLI determinism and exit codes", 10, cli_contracts),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let pass = v.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {} ({:.2}s of {budget}s) {}{}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            v.detail,
            if in_time { "" } else { " [over time budget]" }
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
