use serde_json::{json, Value};
use ttvar_core::benchmarks::condition_grid;
use ttvar_core::measures::{departure_mean, departure_mett, optimal_departure};
use ttvar_core::scenarios::{compare_routes, tradeoff_table, Scenario};
use ttvar_core::verify::{curvature_condition, check_derivative_signs, condition_sweep, monte_carlo_audit, SWEEP_CURVATURE_GRID};
use ttvar_core::{Error, RiskMeasures, SchedulingPreferences, ValuationReport};

use crate::args::{CommandKind, CommonArgs};
use crate::config::{parse_grid, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::{
    breakdown_json, cell, departure_json, measures_json, model_json, num, object, opt_num, prefs_json, valuation_json,
};
use crate::sources::{load_sources, ModelSource};

/// Step for the finite-difference sign checks, relative to each parameter.
pub const DERIVATIVE_STEP: f64 = 1e-4;
pub const DEFAULT_TRADEOFF_GRID: &str = "0.60:0.90:0.05";

/// What a command produced before any files are written.
pub struct Outcome {
    pub results: Value,
    pub digest: String,
    pub warnings: Vec<String>,
    /// Extra CSV files as (file name, content).
    pub figures: Vec<(&'static str, String)>,
    /// Reported after the files are written.
    pub failure: Option<CliError>,
}

fn fit_value(src: &ModelSource) -> Value {
    src.fit.clone().unwrap_or(Value::Null)
}

fn core_err(context: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| CliError::core(context, e)
}

pub fn execute(kind: CommandKind, cfg: &RunConfig, args: &CommonArgs) -> CliResult<Outcome> {
    match kind {
        CommandKind::Fit => fit(cfg, args),
        CommandKind::Measures => measures(cfg, args),
        CommandKind::Value => value(cfg, args),
        CommandKind::Routes => routes(cfg, args),
        CommandKind::Tradeoff => tradeoff(cfg, args),
        CommandKind::Verify => verify(cfg, args),
    }
}

fn fit(cfg: &RunConfig, args: &CommonArgs) -> CliResult<Outcome> {
    let (src, digest, warnings) = load_sources(cfg, &args.inputs, false, true)?.single()?;
    Ok(Outcome {
        results: json!({"name": src.name, "model": model_json(&src.model), "fit": fit_value(&src)}),
        digest,
        warnings,
        figures: Vec::new(),
        failure: None,
    })
}

fn measures(cfg: &RunConfig, args: &CommonArgs) -> CliResult<Outcome> {
    let prefs = cfg.prefs()?;
    let (src, digest, mut warnings) = load_sources(cfg, &args.inputs, false, false)?.single()?;
    let m = &src.model;
    let rm = RiskMeasures::compute(m, &prefs).map_err(core_err("measures"))?;
    if !rm.risk_averse {
        warnings.push("preferences are not risk averse (gamma <= beta or negative margin)".into());
    }
    let mean = departure_mean(m, &prefs).map_err(core_err("mean departure"))?;
    let ttb = optimal_departure(m, &prefs).map_err(core_err("TTB departure"))?;
    let mett = departure_mett(m, &prefs).map_err(core_err("METT departure"))?;
    Ok(Outcome {
        results: json!({
            "name": src.name,
            "model": model_json(m),
            "fit": fit_value(&src),
            "prefs": prefs_json(&prefs),
            "measures": measures_json(&rm),
            "departures": {
                "mean": departure_json(&mean),
                "ttb": departure_json(&ttb),
                "mett": departure_json(&mett),
            },
        }),
        digest,
        warnings,
        figures: Vec::new(),
        failure: None,
    })
}

fn value(cfg: &RunConfig, args: &CommonArgs) -> CliResult<Outcome> {
    let prefs = cfg.prefs()?;
    let (src, digest, warnings) = load_sources(cfg, &args.inputs, false, false)?.single()?;
    let r = ValuationReport::compute(&src.model, &prefs).map_err(core_err("valuation"))?;
    let worst = r.residuals.max();
    let pass = worst <= cfg.tol;
    let failure = (!pass).then(|| {
        CliError::Numerical(format!("cross-check residual {worst:e} exceeds tolerance {:e}", cfg.tol))
    });
    Ok(Outcome {
        results: json!({
            "name": src.name,
            "model": model_json(&src.model),
            "fit": fit_value(&src),
            "prefs": prefs_json(&prefs),
            "measures": measures_json(&r.measures),
            "valuation": valuation_json(&r),
            "residual_check": {"tol": num(cfg.tol), "max": num(worst), "pass": pass},
        }),
        digest,
        warnings,
        figures: Vec::new(),
        failure,
    })
}

fn routes(cfg: &RunConfig, args: &CommonArgs) -> CliResult<Outcome> {
    let prefs = cfg.prefs()?;
    let sources = load_sources(cfg, &args.inputs, true, false)?;
    let named: Vec<(String, ttvar_core::QuantileModel)> =
        sources.models.iter().map(|s| (s.name.clone(), s.model.clone())).collect();
    let cmp = compare_routes(&named, &prefs).map_err(core_err("routes"))?;
    let mut warnings = sources.warnings;

    let mut route_values = Vec::new();
    let mut shares: Vec<(String, [f64; 3])> = Vec::new();
    let mut first_error = None;
    for (src, r) in sources.models.iter().zip(&cmp.routes) {
        let costs = match &r.costs {
            Ok(c) => {
                shares.push((r.name.clone(), c.mett.percents));
                json!({
                    "mean": breakdown_json(&c.mean),
                    "ttb": breakdown_json(&c.ttb),
                    "mett": breakdown_json(&c.mett),
                })
            }
            Err(e) => {
                warnings.push(format!("route {}: {e}", r.name));
                first_error.get_or_insert_with(|| CliError::core(format!("route {}", r.name), e.clone()));
                json!({"error": e.to_string()})
            }
        };
        route_values.push(json!({
            "name": r.name,
            "model": model_json(&src.model),
            "fit": fit_value(src),
            "costs": costs,
        }));
    }
    let ranking = |names: &[Option<String>; 3]| {
        object(Scenario::ALL.iter().map(|s| {
            (s.as_str().to_string(), names[*s as usize].clone().map_or(Value::Null, Value::from))
        }))
    };
    let results = json!({
        "prefs": prefs_json(&prefs),
        "routes": route_values,
        "cheapest": ranking(&cmp.best),
        "most_expensive": ranking(&cmp.worst),
    });

    shares.sort_by(|a, b| a.0.cmp(&b.0));
    let rows: Vec<Vec<String>> = shares
        .iter()
        .map(|(name, p)| vec![name.clone(), cell(p[0]), cell(p[1]), cell(p[2])])
        .collect();
    let figure = crate::report::table_csv(&["route", "certainty_pct", "reliability_pct", "unreliability_pct"], &rows)?;
    // only a total wipe-out is an error; single failures stay in the report
    let failure = if shares.is_empty() { first_error } else { None };
    Ok(Outcome {
        results,
        digest: sources.digest,
        warnings,
        figures: vec![("fig6_decomposition.csv", figure)],
        failure,
    })
}

fn tradeoff(cfg: &RunConfig, args: &CommonArgs) -> CliResult<Outcome> {
    let (alpha, beta) = match (cfg.alpha, cfg.beta) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(CliError::Validation("--alpha and --beta are required".into())),
    };
    let grid = match &cfg.grid {
        Some(g) => g.clone(),
        None => parse_grid(DEFAULT_TRADEOFF_GRID)?,
    };
    if grid[0] <= 0.5 {
        return Err(CliError::Validation("trade-off grid must lie above 0.5".into()));
    }
    let (src, digest, mut warnings) = load_sources(cfg, &args.inputs, false, false)?.single()?;
    if cfg.gamma.is_some() || cfg.tau.is_some() {
        warnings.push("--gamma/--tau are ignored by tradeoff; the grid sets tau".into());
    }
    let rows = tradeoff_table(&src.model, alpha, beta, &grid).map_err(core_err("trade-off table"))?;
    let row_values: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "tau": num(r.tau),
                "gamma": num(r.gamma),
                "ett": num(r.ett),
                "ttvr": num(r.ttvr),
                "ett_change_pct": num(r.ett_change_pct),
                "ttvr_change_pct": num(r.ttvr_change_pct),
            })
        })
        .collect();
    let csv_rows: Vec<Vec<String>> = rows.iter().map(|r| vec![cell(r.tau), cell(r.ett), cell(r.ttvr)]).collect();
    let figure = crate::report::table_csv(&["tau", "ett", "ttvr"], &csv_rows)?;
    Ok(Outcome {
        results: json!({
            "name": src.name,
            "model": model_json(&src.model),
            "fit": fit_value(&src),
            "alpha": num(alpha),
            "beta": num(beta),
            "rows": row_values,
        }),
        digest,
        warnings,
        figures: vec![("fig8_tradeoff.csv", figure)],
        failure: None,
    })
}

fn verify_prefs(cfg: &RunConfig) -> CliResult<SchedulingPreferences> {
    if cfg.alpha.is_none() && cfg.beta.is_none() && cfg.gamma.is_none() && cfg.tau.is_none() {
        return SchedulingPreferences::from_penalties(2.0, 1.0, 4.0).map_err(core_err("preferences"));
    }
    cfg.prefs()
}

fn verify(cfg: &RunConfig, args: &CommonArgs) -> CliResult<Outcome> {
    let prefs = verify_prefs(cfg)?;
    let grid = cfg.grid.clone().unwrap_or_else(condition_grid);
    let sources = load_sources(cfg, &args.inputs, false, false)?;
    if sources.models.is_empty() {
        return Err(CliError::Validation("verify needs at least one sample file or --model".into()));
    }
    if cfg.draws < ttvar_core::verify::MIN_DRAWS {
        return Err(CliError::Validation(format!(
            "--draws must be at least {}",
            ttvar_core::verify::MIN_DRAWS
        )));
    }
    let mut warnings = sources.warnings;
    let mut model_values = Vec::new();
    let mut ratios: Vec<(String, f64, Option<f64>)> = Vec::new();
    let mut failed = Vec::new();

    for src in &sources.models {
        let m = &src.model;
        let mut pass = true;

        let derivatives = match check_derivative_signs(m, &prefs, DERIVATIVE_STEP) {
            Ok(checks) => {
                pass &= checks.iter().all(|c| c.pass && c.closed_form_match != Some(false));
                for c in checks.iter().filter(|c| c.flagged) {
                    warnings.push(format!("{}: {} step halving disagrees by more than 1e-4", src.name, c.target.as_str()));
                }
                Value::Array(
                    checks
                        .iter()
                        .map(|c| {
                            json!({
                                "target": c.target.as_str(),
                                "expected_sign": c.expected_sign.as_str(),
                                "estimate": num(c.estimate),
                                "estimate_half": num(c.estimate_half),
                                "extrapolated": num(c.extrapolated),
                                "step": num(c.step),
                                "pass": c.pass,
                                "flagged": c.flagged,
                                "closed_form": opt_num(c.closed_form),
                                "closed_form_match": c.closed_form_match,
                            })
                        })
                        .collect(),
                )
            }
            Err(e) => {
                pass = false;
                json!({"error": e.to_string()})
            }
        };

        let curvature = match curvature_condition(m, prefs.tau(), SWEEP_CURVATURE_GRID) {
            Ok(c) => {
                pass &= c.implication_holds;
                json!({
                    "tau": num(c.tau),
                    "all_hold": c.all_hold,
                    "valid_condition": c.valid_condition,
                    "implication_holds": c.implication_holds,
                    "points": c.points.iter().map(|p| json!({"p": num(p.p), "ratio": num(p.ratio), "holds": p.holds})).collect::<Vec<_>>(),
                })
            }
            Err(Error::RequiresContinuousModel) => json!({"skipped": "model is not smooth"}),
            Err(e) => {
                pass = false;
                json!({"error": e.to_string()})
            }
        };

        let monte_carlo = match monte_carlo_audit(m, &prefs, cfg.draws, cfg.seed) {
            Ok(a) => {
                pass &= a.all_pass();
                json!({
                    "draws": a.draws,
                    "seed": a.seed,
                    "all_pass": a.all_pass(),
                    "estimates": a.estimates.iter().map(|e| json!({
                        "quantity": e.quantity.as_str(),
                        "estimate": num(e.estimate),
                        "std_error": num(e.std_error),
                        "analytic": num(e.analytic),
                        "pass": e.pass,
                    })).collect::<Vec<_>>(),
                })
            }
            Err(e) => {
                pass = false;
                json!({"error": e.to_string()})
            }
        };

        let sweep = match condition_sweep(std::slice::from_ref(m), &grid).map_err(core_err("condition sweep"))?.remove(0) {
            Ok(s) => {
                pass &= s.all_valid;
                for p in &s.points {
                    ratios.push((src.name.clone(), p.tau, p.ratio));
                }
                json!({
                    "all_valid": s.all_valid,
                    "in_domain": s.in_domain(),
                    "outside_domain": s.outside_domain(),
                    "points": s.points.iter().map(|p| json!({
                        "tau": num(p.tau),
                        "ratio": opt_num(p.ratio),
                        "curvature_holds": p.curvature_holds,
                    })).collect::<Vec<_>>(),
                })
            }
            Err(e) => {
                pass = false;
                json!({"error": e.to_string()})
            }
        };

        if !pass {
            failed.push(src.name.clone());
        }
        model_values.push(json!({
            "name": src.name,
            "model": model_json(m),
            "fit": fit_value(src),
            "pass": pass,
            "derivatives": derivatives,
            "curvature": curvature,
            "monte_carlo": monte_carlo,
            "condition_sweep": sweep,
        }));
    }

    ratios.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let rows: Vec<Vec<String>> = ratios
        .iter()
        .map(|(name, tau, ratio)| vec![name.clone(), cell(*tau), ratio.map(cell).unwrap_or_default()])
        .collect();
    let figure = crate::report::table_csv(&["model", "tau", "ratio"], &rows)?;
    let failure = (!failed.is_empty()).then(|| CliError::Numerical(format!("verification failed for: {}", failed.join(", "))));
    Ok(Outcome {
        results: json!({
            "prefs": prefs_json(&prefs),
            "derivative_step": num(DERIVATIVE_STEP),
            "grid": grid.iter().copied().map(num).collect::<Vec<_>>(),
            "models": model_values,
            "all_pass": failed.is_empty(),
        }),
        digest: sources.digest,
        warnings,
        figures: vec![("fig7_condition.csv", figure)],
        failure,
    })
}
