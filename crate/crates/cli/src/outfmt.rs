//! Output plumbing: exit-coded errors, the reproducibility header carried
//! by every result file, and fixed 9-significant-digit number formatting
//! so reruns diff clean.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fmt;
use std::path::{Path, PathBuf};

/// Failure with the exit code the process must return.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl CliError {
    pub fn conflict(message: impl Into<String>) -> CliError {
        CliError { code: 4, message: message.into() }
    }

    pub fn missing_file(path: &Path, detail: impl fmt::Display) -> CliError {
        CliError { code: 2, message: format!("cannot read {}: {detail}", path.display()) }
    }

    pub fn bad_schema(path: &Path, detail: impl fmt::Display) -> CliError {
        CliError { code: 3, message: format!("invalid design schema in {}: {detail}", path.display()) }
    }

    pub fn malformed_result(path: &Path, detail: impl fmt::Display) -> CliError {
        CliError { code: 5, message: format!("malformed result file {}: {detail}", path.display()) }
    }
}

impl From<ccchart_core::error::Error> for CliError {
    fn from(e: ccchart_core::error::Error) -> CliError {
        CliError { code: 1, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError { code: 1, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// The resolved invocation, embedded verbatim in every output file so any
/// result can be traced back to the command that produced it.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub presets: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub designs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_total: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub legs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub out: String,
    #[serde(default)]
    pub svg: bool,
    #[serde(default)]
    pub ratio: bool,
}

/// Leading line of every CSV this tool writes.
pub const CSV_CONFIG_PREFIX: &str = "# ccchart ";

impl RunConfig {
    pub fn comment_line(&self) -> String {
        format!("{CSV_CONFIG_PREFIX}{}", serde_json::to_string(self).expect("config serializes"))
    }
}

/// Formats with exactly 9 significant digits: positional in a moderate
/// exponent range, scientific outside it. Deterministic for every input.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..=8).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}

/// The nearest f64 to the 9-significant-digit decimal form of `x`; applied
/// to computed values before JSON serialization so emitted JSON numbers
/// are as short and stable as the CSV fields.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    sig9(x).parse().expect("sig9 emits parseable numbers")
}

/// Recursively rounds every fractional number in a JSON tree to 9
/// significant digits; integers pass through untouched.
pub fn round_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                Value::Number(n)
            } else {
                let x = n.as_f64().expect("checked above");
                serde_json::Number::from_f64(round9(x)).map(Value::Number).unwrap_or(Value::Null)
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_numbers).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_numbers(v))).collect())
        }
        other => other,
    }
}

/// Writes pretty JSON with rounded numbers and a trailing newline.
pub fn write_json(path: &Path, value: Value) -> CliResult<()> {
    let rounded = round_numbers(value);
    let text = serde_json::to_string_pretty(&rounded).expect("value serializes");
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Joins the output directory (created on demand) with a file name.
pub fn out_path(dir: &Path, file_name: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir)?;
    Ok(dir.join(file_name))
}

/// File-name-safe design name.
pub fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || ".-_".contains(c) { c } else { '-' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits_across_magnitudes() {
        assert_eq!(sig9(0.130899694), "0.130899694");
        assert_eq!(sig9(1.753), "1.75300000");
        assert_eq!(sig9(-0.25), "-0.250000000");
        assert_eq!(sig9(123456789.0), "123456789");
        assert_eq!(sig9(0.0001234567891), "0.000123456789");
        assert_eq!(sig9(1.2345678912e12), "1.23456789e12");
        assert_eq!(sig9(0.0), "0.00000000");
    }

    #[test]
    fn rounding_is_idempotent() {
        for x in [std::f64::consts::PI, 0.1 + 0.2, -1.0 / 3.0, 7.25e-7] {
            let once = round9(x);
            assert_eq!(round9(once), once);
        }
    }

    #[test]
    fn config_comment_round_trips() {
        let config = RunConfig {
            command: "boundary".into(),
            presets: vec!["i4opt".into()],
            mode: Some("spherical".into()),
            psi_deg: Some(45.0),
            out: ".".into(),
            ..RunConfig::default()
        };
        let line = config.comment_line();
        let json = line.strip_prefix(CSV_CONFIG_PREFIX).unwrap();
        let back: RunConfig = serde_json::from_str(json).unwrap();
        assert_eq!(back.comment_line(), line);
    }
}
