use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{json, Value};
use ttvar_core::SchedulingPreferences;

use crate::args::CommonArgs;
use crate::error::{CliError, CliResult};
use crate::report::num;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Logn,
    Burr,
    Empirical,
    Auto,
}

impl Dist {
    pub fn as_str(&self) -> &'static str {
        match self {
            Dist::Logn => "logn",
            Dist::Burr => "burr",
            Dist::Empirical => "empirical",
            Dist::Auto => "auto",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Both => "both",
        }
    }

    pub fn json(&self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(&self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrefsSpec {
    Gamma { alpha: f64, beta: f64, gamma: f64 },
    Tau { alpha: f64, beta: f64, tau: f64 },
}

impl PrefsSpec {
    pub fn build(&self) -> CliResult<SchedulingPreferences> {
        let p = match *self {
            PrefsSpec::Gamma { alpha, beta, gamma } => SchedulingPreferences::from_penalties(alpha, beta, gamma),
            PrefsSpec::Tau { alpha, beta, tau } => SchedulingPreferences::from_punctuality(alpha, beta, tau),
        };
        p.map_err(|e| CliError::core("preferences", e))
    }
}

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_DRAWS: usize = 1_000_000;

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub tau: Option<f64>,
    pub dist: Dist,
    pub tol: f64,
    pub seed: u64,
    pub grid: Option<Vec<f64>>,
    pub draws: usize,
    pub out: PathBuf,
    pub format: Format,
    pub models: Vec<String>,
}

impl RunConfig {
    /// Flags override the `--config` file, which overrides defaults.
    pub fn resolve(args: &CommonArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let f64_key = |key: &str| -> CliResult<Option<f64>> {
            file.get(key)
                .map(|v| v.parse::<f64>().map_err(|_| invalid_value(key, v)))
                .transpose()
        };

        let alpha = args.alpha.or(f64_key("alpha")?);
        let beta = args.beta.or(f64_key("beta")?);
        // gamma and tau travel together: any flag for either replaces both file entries
        let (gamma, tau) = if args.gamma.is_some() || args.tau.is_some() {
            (args.gamma, args.tau)
        } else {
            (f64_key("gamma")?, f64_key("tau")?)
        };
        let dist = match (args.dist, file.get("dist")) {
            (Some(d), _) => d,
            (None, Some(v)) => Dist::from_str(v, true).map_err(|_| invalid_value("dist", v))?,
            (None, None) => Dist::Auto,
        };
        let format = match (args.format, file.get("format")) {
            (Some(f), _) => f,
            (None, Some(v)) => Format::from_str(v, true).map_err(|_| invalid_value("format", v))?,
            (None, None) => Format::Json,
        };
        let tol = args.tol.or(f64_key("tol")?).unwrap_or(DEFAULT_TOL);
        let seed = match (args.seed, file.get("seed")) {
            (Some(s), _) => s,
            (None, Some(v)) => v.parse().map_err(|_| invalid_value("seed", v))?,
            (None, None) => 0,
        };
        let draws = match (args.draws, file.get("draws")) {
            (Some(d), _) => d,
            (None, Some(v)) => v.parse().map_err(|_| invalid_value("draws", v))?,
            (None, None) => DEFAULT_DRAWS,
        };
        let grid = match args.grid.as_deref().or(file.get("grid").map(String::as_str)) {
            Some(g) => Some(parse_grid(g)?),
            None => None,
        };
        let out = args
            .out
            .clone()
            .or_else(|| file.get("out").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let mut models = args.models.clone();
        if models.is_empty() {
            if let Some(m) = file.get("model") {
                models = m.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            }
        }

        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma), ("tau", tau)] {
            if let Some(x) = v {
                if !x.is_finite() {
                    return Err(CliError::Validation(format!("--{name} must be finite, got {x}")));
                }
            }
        }
        if !(1e-12..=1e-3).contains(&tol) {
            return Err(CliError::Validation(format!("--tol must lie in [1e-12, 1e-3], got {tol}")));
        }

        Ok(RunConfig {
            alpha,
            beta,
            gamma,
            tau,
            dist,
            tol,
            seed,
            grid,
            draws,
            out,
            format,
            models,
        })
    }

    /// Requires `alpha`, `beta` and exactly one of `gamma`, `tau`.
    pub fn prefs_spec(&self) -> CliResult<PrefsSpec> {
        let (alpha, beta) = match (self.alpha, self.beta) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(CliError::Validation("--alpha and --beta are required".into())),
        };
        match (self.gamma, self.tau) {
            (Some(gamma), None) => Ok(PrefsSpec::Gamma { alpha, beta, gamma }),
            (None, Some(tau)) => Ok(PrefsSpec::Tau { alpha, beta, tau }),
            (Some(_), Some(_)) => Err(CliError::Validation("give either --gamma or --tau, not both".into())),
            (None, None) => Err(CliError::Validation("one of --gamma or --tau is required".into())),
        }
    }

    pub fn prefs(&self) -> CliResult<SchedulingPreferences> {
        self.prefs_spec()?.build()
    }

    /// Echoed into every report. The output directory is left out so that
    /// reports written to different places stay identical.
    pub fn echo(&self) -> Value {
        let opt = |x: Option<f64>| x.map(num).unwrap_or(Value::Null);
        json!({
            "alpha": opt(self.alpha),
            "beta": opt(self.beta),
            "gamma": opt(self.gamma),
            "tau": opt(self.tau),
            "dist": self.dist.as_str(),
            "tol": num(self.tol),
            "seed": self.seed,
            "grid": self.grid.as_ref().map(|g| Value::Array(g.iter().copied().map(num).collect())).unwrap_or(Value::Null),
            "draws": self.draws,
            "format": self.format.as_str(),
            "models": self.models,
        })
    }
}

fn invalid_value(key: &str, v: &str) -> CliError {
    CliError::Validation(format!("invalid value {v:?} for {key}"))
}

const CONFIG_KEYS: [&str; 12] = [
    "alpha", "beta", "gamma", "tau", "dist", "tol", "seed", "grid", "draws", "out", "format", "model",
];

/// `key = value` lines; blank lines and `#` comments are ignored.
pub fn read_config_file(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| CliError::Parse {
            path: path.to_path_buf(),
            line: i as u64 + 1,
            message,
        };
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected key=value, got {line:?}")))?;
        let k = k.trim();
        if !CONFIG_KEYS.contains(&k) {
            return Err(parse_err(format!("unknown key {k:?}")));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// `start:stop:step` (inclusive of `stop`) or a comma-separated list.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::Validation(format!("invalid grid {spec:?}: {why}"));
    let grid: Vec<f64> = if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("expected start:stop:step"))?;
        let [start, stop, step] = parts[..] else {
            return Err(bad("expected start:stop:step"));
        };
        if !(step > 0.0) || !(stop >= start) {
            return Err(bad("need step > 0 and stop >= start"));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        if n > 100_000 {
            return Err(bad("too many points"));
        }
        // round away the accumulated binary noise of start + i*step
        (0..=n).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect()
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("expected comma-separated numbers"))?
    };
    ttvar_core::verify::check_tau_grid(&grid).map_err(|e| bad(&e.to_string()))?;
    Ok(grid)
}
