use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// Values read from one sample file, plus notes about skipped rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub values: Vec<f64>,
    pub warnings: Vec<String>,
}

/// One named column of a multi-route file.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedSamples {
    pub name: String,
    pub values: Vec<f64>,
}

pub(crate) fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_text(path: &Path) -> CliResult<String> {
    String::from_utf8(read_bytes(path)?).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: 1 + e.as_bytes()[..e.utf8_error().valid_up_to()].iter().filter(|&&b| b == b'\n').count() as u64,
        message: "file is not valid UTF-8".into(),
    })
}

fn parse_value(path: &Path, line: u64, field: &str) -> CliResult<f64> {
    let err = |message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let v: f64 = field.parse().map_err(|_| err(format!("not a number: {field:?}")))?;
    if !v.is_finite() {
        return Err(err(format!("not a finite number: {field:?}")));
    }
    if v <= 0.0 {
        return Err(err(format!("non-positive sample {v}")));
    }
    Ok(v)
}

fn is_header(line: &str) -> bool {
    line.split(',').any(|f| f.trim().parse::<f64>().is_err())
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn skipped_note(path: &Path, skipped: usize, values: &[f64]) -> Vec<String> {
    if skipped == 0 {
        return Vec::new();
    }
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    vec![format!(
        "{}: skipped {skipped} empty rows; kept {} values (min {lo}, max {hi})",
        path.display(),
        values.len()
    )]
}

/// Reads positive travel times: one per line, or the `travel_time` column
/// of a CSV whose first non-blank line is a header.
pub fn ingest_samples(path: &Path) -> CliResult<Samples> {
    let text = read_text(path)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    let mut values = Vec::new();
    let mut skipped = 0usize;

    if first.is_some_and(is_header) {
        let mut rdr = csv_reader(&text);
        let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
        let col = headers.iter().position(|h| h == "travel_time").ok_or_else(|| CliError::Parse {
            path: path.to_path_buf(),
            line: header_line(&text),
            message: "header has no travel_time column".into(),
        })?;
        for record in rdr.records() {
            let record = record.map_err(|e| csv_error(path, e))?;
            let line = record.position().map_or(0, |p| p.line());
            match record.get(col) {
                Some(f) if !f.is_empty() => values.push(parse_value(path, line, f)?),
                _ => skipped += 1,
            }
        }
    } else {
        for (i, raw) in text.lines().enumerate() {
            let field = raw.trim();
            if field.is_empty() {
                skipped += 1;
                continue;
            }
            values.push(parse_value(path, i as u64 + 1, field)?);
        }
    }
    if values.is_empty() {
        return Err(CliError::Validation(format!("{}: no samples", path.display())));
    }
    let warnings = skipped_note(path, skipped, &values);
    Ok(Samples { values, warnings })
}

fn header_line(text: &str) -> u64 {
    text.lines().position(|l| !l.trim().is_empty()).map_or(1, |i| i as u64 + 1)
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    }
}

/// Reads a CSV with one column per route; an `id` column is ignored and
/// empty cells are skipped so columns may differ in length.
pub fn ingest_route_table(path: &Path) -> CliResult<(Vec<NamedSamples>, Vec<String>)> {
    let text = read_text(path)?;
    let mut rdr = csv_reader(&text);
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.iter().all(|h| h.parse::<f64>().is_ok()) {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "expected a header row naming each route".into(),
        });
    }
    let cols: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter(|(_, h)| *h != "id")
        .map(|(i, h)| (i, h.to_string()))
        .collect();
    let mut out: Vec<NamedSamples> = cols
        .iter()
        .map(|(_, name)| NamedSamples {
            name: name.clone(),
            values: Vec::new(),
        })
        .collect();
    let mut skipped = 0usize;
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        for (slot, (col, _)) in out.iter_mut().zip(&cols) {
            match record.get(*col) {
                Some(f) if !f.is_empty() => slot.values.push(parse_value(path, line, f)?),
                _ => skipped += 1,
            }
        }
    }
    let mut warnings = Vec::new();
    if skipped > 0 {
        warnings.push(format!("{}: skipped {skipped} empty cells", path.display()));
    }
    Ok((out, warnings))
}

/// Route or model name derived from a sample file.
pub fn file_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| PathBuf::from(path).display().to_string())
}
