use std::path::PathBuf;

use serde_json::{json, Value};
use ttvar_core::benchmarks::{dataset, six_path_routes};
use ttvar_core::fit::{empirical_from_samples, fit_burr, fit_lognormal_mle, ks_statistic, summary_stats};
use ttvar_core::{Interpolation, QuantileModel};

use crate::config::{Dist, RunConfig};
use crate::error::{CliError, CliResult};
use crate::ingest::{file_label, ingest_route_table, ingest_samples, read_bytes};
use crate::report::{model_json, num, opt_num, InputDigest};

/// Burr replaces lognormal under `--dist auto` only when its KS distance is
/// smaller by more than this.
pub const AUTO_KS_MARGIN: f64 = 0.02;

#[derive(Debug, Clone)]
pub struct ModelSource {
    pub name: String,
    pub model: QuantileModel,
    /// Fit diagnostics when the model came from samples.
    pub fit: Option<Value>,
}

#[derive(Debug)]
pub struct Sources {
    pub models: Vec<ModelSource>,
    pub digest: String,
    pub warnings: Vec<String>,
}

impl Sources {
    pub fn single(mut self) -> CliResult<(ModelSource, String, Vec<String>)> {
        if self.models.len() != 1 {
            return Err(CliError::Validation(format!(
                "expected exactly one sample file or --model, got {}",
                self.models.len()
            )));
        }
        Ok((self.models.remove(0), self.digest, self.warnings))
    }
}

fn builtin_error(spec: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("invalid model {spec:?}: {why}"))
}

/// Parses `[NAME=]builtin:...` into a name and an analytic model.
pub fn parse_builtin(spec: &str) -> CliResult<(String, QuantileModel)> {
    let (name, body) = match spec.split_once('=') {
        Some((n, b)) if !n.trim().is_empty() => (Some(n.trim().to_string()), b.trim()),
        _ => (None, spec.trim()),
    };
    let rest = body
        .strip_prefix("builtin:")
        .ok_or_else(|| builtin_error(spec, "expected builtin:<kind>[:params]"))?;
    let mut parts = rest.split(':');
    let kind = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    let numbers = |n: usize| -> CliResult<Vec<f64>> {
        if args.len() != n {
            return Err(builtin_error(spec, format!("{kind} takes {n} parameters")));
        }
        args.iter()
            .map(|a| a.parse::<f64>().map_err(|_| builtin_error(spec, format!("not a number: {a:?}"))))
            .collect()
    };
    let core = |e: ttvar_core::Error| builtin_error(spec, e);
    let (default_name, model) = match kind {
        "uniform" if args.is_empty() => (rest.to_string(), QuantileModel::uniform_with_moments(10.0, 1.0).map_err(core)?),
        "uniform" => {
            let p = numbers(2)?;
            (rest.to_string(), QuantileModel::uniform(p[0], p[1]).map_err(core)?)
        }
        "logn" => {
            let p = numbers(2)?;
            (rest.to_string(), QuantileModel::lognormal(p[0], p[1]).map_err(core)?)
        }
        "burr" => {
            let p = numbers(3)?;
            (rest.to_string(), QuantileModel::burr(p[0], p[1], p[2]).map_err(core)?)
        }
        "degenerate" => {
            let p = numbers(1)?;
            (rest.to_string(), QuantileModel::degenerate(p[0]).map_err(core)?)
        }
        "dataset" => {
            let [id] = args[..] else {
                return Err(builtin_error(spec, "dataset takes a dataset name"));
            };
            let d = dataset(id).ok_or_else(|| builtin_error(spec, "unknown dataset"))?;
            (d.name.to_string(), d.lognormal().map_err(core)?)
        }
        "route" => {
            let [n] = args[..] else {
                return Err(builtin_error(spec, "route takes a number 1-6"));
            };
            let idx: usize = n.parse().map_err(|_| builtin_error(spec, "route takes a number 1-6"))?;
            let mut routes = six_path_routes().map_err(core)?;
            if !(1..=routes.len()).contains(&idx) {
                return Err(builtin_error(spec, "route takes a number 1-6"));
            }
            routes.swap_remove(idx - 1)
        }
        _ => return Err(builtin_error(spec, "unknown builtin")),
    };
    Ok((name.unwrap_or(default_name), model))
}

type Candidate = Option<ttvar_core::Result<(QuantileModel, f64)>>;

fn candidate(result: ttvar_core::Result<QuantileModel>, values: &[f64]) -> (Candidate, Value) {
    let r = result.and_then(|m| ks_statistic(values, &m).map(|ks| (m, ks)));
    let v = match &r {
        Ok((m, ks)) => json!({"model": model_json(m), "ks": num(*ks)}),
        Err(e) => json!({"error": e.to_string()}),
    };
    (Some(r), v)
}

fn take(c: Candidate, family: &str) -> CliResult<QuantileModel> {
    match c {
        Some(Ok((m, _))) => Ok(m),
        Some(Err(e)) => Err(CliError::core(format!("{family} fit"), e)),
        None => unreachable!("candidate requested"),
    }
}

/// Fits the requested family. With `all_candidates` both parametric
/// families are fitted and reported whatever `dist` asks for.
pub fn fit_samples(values: &[f64], dist: Dist, all_candidates: bool, warnings: &mut Vec<String>) -> CliResult<(QuantileModel, Value)> {
    let want_logn = all_candidates || matches!(dist, Dist::Logn | Dist::Auto);
    let want_burr = all_candidates || matches!(dist, Dist::Burr | Dist::Auto);
    let summary = summary_stats(values).map_err(|e| CliError::core("summary statistics", e))?;
    let (logn, logn_json) = if want_logn { candidate(fit_lognormal_mle(values), values) } else { (None, Value::Null) };
    let (burr, burr_json) = if want_burr { candidate(fit_burr(values), values) } else { (None, Value::Null) };

    let model = match dist {
        Dist::Logn => take(logn, "lognormal")?,
        Dist::Burr => take(burr, "Burr XII")?,
        Dist::Empirical => {
            empirical_from_samples(values, Interpolation::Linear).map_err(|e| CliError::core("empirical model", e))?
        }
        Dist::Auto => match (logn, burr) {
            (Some(Ok((l, kl))), Some(Ok((b, kb)))) => {
                if kl - kb > AUTO_KS_MARGIN {
                    b
                } else {
                    l
                }
            }
            (Some(Ok((l, _))), _) => {
                warnings.push("Burr XII fit failed; using lognormal".into());
                l
            }
            (l, _) => take(l, "lognormal")?,
        },
    };
    let fit = json!({
        "dist": dist.as_str(),
        "selected": model.kind().as_str(),
        "selection_rule": format!("burr if ks_lognormal - ks_burr > {AUTO_KS_MARGIN}"),
        "candidates": {"lognormal": logn_json, "burr_xii": burr_json},
        "summary": {
            "n": summary.n,
            "mean": num(summary.mean),
            "std": num(summary.std),
            "skewness": opt_num(summary.skewness),
            "excess_kurtosis": opt_num(summary.kurtosis),
        },
    });
    Ok((model, fit))
}

/// Collects models from sample files (fitted per `--dist`) followed by `--model` specs.
///
/// With `route_table`, a single input file is read as one column per route.
pub fn load_sources(cfg: &RunConfig, inputs: &[PathBuf], route_table: bool, all_candidates: bool) -> CliResult<Sources> {
    let mut digest = InputDigest::default();
    let mut warnings = Vec::new();
    let mut models = Vec::new();

    if route_table && inputs.len() == 1 {
        let path = &inputs[0];
        digest.add(&read_bytes(path)?);
        let (columns, w) = ingest_route_table(path)?;
        warnings.extend(w);
        for col in columns {
            let (model, fit) = fit_samples(&col.values, cfg.dist, all_candidates, &mut warnings)
                .map_err(|e| with_context(e, &col.name))?;
            models.push(ModelSource {
                name: col.name,
                model,
                fit: Some(fit),
            });
        }
    } else {
        for path in inputs {
            digest.add(&read_bytes(path)?);
            let samples = ingest_samples(path)?;
            warnings.extend(samples.warnings);
            let name = file_label(path);
            let (model, fit) = fit_samples(&samples.values, cfg.dist, all_candidates, &mut warnings)
                .map_err(|e| with_context(e, &name))?;
            models.push(ModelSource {
                name,
                model,
                fit: Some(fit),
            });
        }
    }
    for spec in &cfg.models {
        digest.add(spec.as_bytes());
        let (name, model) = parse_builtin(spec)?;
        models.push(ModelSource { name, model, fit: None });
    }
    let mut names: Vec<&str> = models.iter().map(|m| m.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Validation(format!("duplicate model name {:?}; use NAME=builtin:...", w[0])));
    }
    Ok(Sources {
        models,
        digest: digest.finish(),
        warnings,
    })
}

fn with_context(e: CliError, name: &str) -> CliError {
    match e {
        CliError::Core { context, source } => CliError::Core {
            context: format!("{name}: {context}"),
            source,
        },
        other => other,
    }
}
