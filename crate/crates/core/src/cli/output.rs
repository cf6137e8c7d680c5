//! CSV and JSON writers with a fixed number of significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// Formats `x` in scientific notation with `digits` significant digits.
pub fn format_number(x: f64, digits: usize) -> String {
    if x == 0.0 {
        // collapse -0 so equal results print identically
        return format!("{:.*e}", digits.saturating_sub(1), 0.0);
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
}

/// Rounds `x` to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format_number(x, digits).parse().unwrap_or(x)
}

/// Rounds every float inside a JSON value; integers are left alone.
pub fn round_json(value: &mut Value, digits: usize) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_sig(x, digits)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_json(v, digits)),
        Value::Object(map) => map.values_mut().for_each(|v| round_json(v, digits)),
        _ => {}
    }
}

/// Serializes `summary` with rounded floats as pretty JSON. A top-level
/// `config` entry keeps full precision so the summary reruns the same scenario.
pub fn json_string<T: Serialize>(summary: &T, digits: usize) -> Result<String> {
    let mut value = serde_json::to_value(summary).map_err(|e| Error::Config(e.to_string()))?;
    match &mut value {
        Value::Object(map) => map
            .iter_mut()
            .filter(|(k, _)| k.as_str() != "config")
            .for_each(|(_, v)| round_json(v, digits)),
        other => round_json(other, digits),
    }
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| Error::Config(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Renders rows as CSV text.
pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| Error::Io(e.into()))?;
    for row in rows {
        w.write_record(row).map_err(|e| Error::Io(e.into()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

/// Writes `contents` to `dir/name`, creating the directory if needed.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}
