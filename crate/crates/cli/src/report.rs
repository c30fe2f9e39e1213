use std::path::{Path, PathBuf};

use serde_json::{json, Map, Number, Value};
use sha2::{Digest, Sha256};
use ttvar_core::measures::DepartureAnalysis;
use ttvar_core::scenarios::TripCostBreakdown;
use ttvar_core::valuation::Residuals;
use ttvar_core::{QuantileModel, RiskMeasures, SchedulingPreferences, ValuationReport};

use crate::error::{CliError, CliResult};

pub const TOOL_VERSION: &str = concat!("ttvar ", env!("CARGO_PKG_VERSION"));

/// A JSON number rounded to 15 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    // avoid a signed zero in the output
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

/// CSV cell text for a number, formatted like the JSON output.
pub fn cell(x: f64) -> String {
    match num(x) {
        Value::Null => String::new(),
        v => v.to_string(),
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// SHA-256 over every input, each prefixed by its byte length.
#[derive(Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn add(&mut self, bytes: &[u8]) {
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    pub fn finish(self) -> String {
        let hex: String = self.0.finalize().iter().map(|b| format!("{b:02x}")).collect();
        format!("sha256:{hex}")
    }
}

pub fn envelope(command: &str, config: Value, digest: String, results: Value, warnings: &[String]) -> Value {
    json!({
        "tool_version": TOOL_VERSION,
        "command": command,
        "config_echo": config,
        "inputs_digest": digest,
        "results": results,
        "warnings": warnings,
    })
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serializable");
    s.push('\n');
    s
}

/// `key,value` rows, one per leaf of the JSON tree, keys joined by dots.
pub fn flatten_csv(v: &Value) -> CliResult<String> {
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(&join(k), x, rows)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(&join(&i.to_string()), x, rows)),
            Value::Null => rows.push((prefix.to_string(), String::new())),
            Value::String(s) => rows.push((prefix.to_string(), s.clone())),
            other => rows.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).map_err(csv_io)?;
    for (k, x) in rows {
        w.write_record([k, x]).map_err(csv_io)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| csv_io(e.into_error().into()))?).expect("csv output is UTF-8"))
}

fn csv_io(e: csv::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<csv>"),
        source: std::io::Error::other(e.to_string()),
    }
}

/// Writes a CSV table with the given header.
pub fn table_csv(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_io)?;
    for r in rows {
        w.write_record(r).map_err(csv_io)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| csv_io(e.into_error().into()))?).expect("csv output is UTF-8"))
}

pub fn write_file(dir: &Path, name: &str, content: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    std::fs::write(&path, content).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

pub fn model_json(model: &QuantileModel) -> Value {
    let params = match model {
        QuantileModel::Lognormal(m) => json!({"xi": num(m.xi()), "psi": num(m.psi())}),
        QuantileModel::BurrXii(m) => json!({"c": num(m.c()), "k": num(m.k()), "scale": num(m.scale())}),
        QuantileModel::Empirical(m) => json!({
            "n": m.len(),
            "interpolation": format!("{:?}", m.rule()).to_lowercase(),
        }),
        QuantileModel::Degenerate(v) => json!({"value": num(*v)}),
        QuantileModel::Uniform { lower, upper } => json!({"lower": num(*lower), "upper": num(*upper)}),
    };
    json!({
        "kind": model.kind().as_str(),
        "params": params,
        "mean": num(model.mean()),
        "std": num(model.std_dev()),
    })
}

pub fn prefs_json(p: &SchedulingPreferences) -> Value {
    json!({
        "alpha": num(p.alpha()),
        "beta": num(p.beta()),
        "gamma": num(p.gamma()),
        "tau": num(p.tau()),
        "risk_averse": p.is_risk_averse(),
    })
}

pub fn measures_json(m: &RiskMeasures) -> Value {
    json!({
        "tau": num(m.tau),
        "mean": num(m.mean),
        "std": num(m.std),
        "unreliability_area": num(m.s_u),
        "ttb": num(m.ttb),
        "delta_ttm": num(m.delta_ttm),
        "delta_eed": num(m.delta_eed),
        "mett": num(m.mett),
        "ett": num(m.ett()),
        "zeta_ttm": num(m.zeta_ttm),
        "zeta_eed": num(m.zeta_eed),
        "zeta_ett": num(m.zeta_ett),
        "premium": num(m.premium),
        "zeta_residual": num(m.zeta_residual),
        "risk_averse": m.risk_averse,
    })
}

pub fn departure_json(d: &DepartureAnalysis) -> Value {
    json!({
        "criterion": d.criterion.as_str(),
        "departure": num(d.departure),
        "expected_utility": num(d.expected_utility),
        "cost": num(d.cost),
        "degenerate": d.degenerate,
    })
}

pub fn residuals_json(r: &Residuals) -> Value {
    json!({
        "vor_dual": num(r.vor_dual),
        "vou_dual": num(r.vou_dual),
        "vov_dual": num(r.vov_dual),
        "decomposition": num(r.decomposition),
        "kappa": num(r.kappa),
        "zeta": num(r.zeta),
        "max": num(r.max()),
    })
}

pub fn valuation_json(r: &ValuationReport) -> Value {
    json!({
        "vor": num(r.vor),
        "vou": num(r.vou),
        "vov": num(r.vov),
        "ttrr": num(r.ttrr),
        "ttvr": num(r.ttvr),
        "kappa": num(r.kappa),
        "ell": num(r.ell),
        "valid": r.valid,
        "margin": num(r.margin),
        "condition_ratio": num(r.condition_ratio()),
        "f_zeta_ett": num(r.f_zeta_ett),
        "tail_tau": num(r.tail_tau),
        "tail_ett": num(r.tail_ett),
        "excess_ett": num(r.excess_ett),
        "cost_ttb": num(r.cost_ttb),
        "cost_mett": num(r.cost_mett),
        "residuals": residuals_json(&r.residuals),
    })
}

pub fn breakdown_json(b: &TripCostBreakdown) -> Value {
    json!({
        "certainty": num(b.certainty),
        "reliability": num(b.reliability),
        "unreliability": num(b.unreliability),
        "total": num(b.total),
        "shares": {
            "certainty": num(b.percents[0]),
            "reliability": num(b.percents[1]),
            "unreliability": num(b.percents[2]),
        },
        "identity_residual": num(b.identity_residual),
    })
}

pub fn object(entries: impl IntoIterator<Item = (String, Value)>) -> Value {
    Value::Object(entries.into_iter().collect::<Map<_, _>>())
}
