//! CSV and JSON writers with 12 significant digits.

use serde::Serialize;
use serde_json::Value;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.11e}")
}

fn round12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        v
    } else {
        format!("{v:.11e}").parse().expect("formatted float parses")
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round12(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn to_json<T: Serialize>(report: &T) -> Result<String, CliError> {
    let mut v = serde_json::to_value(report).map_err(|e| CliError::Solver(format!("report serialization: {e}")))?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    Ok(s)
}

/// CSV with a leading `# units:` comment and a header row.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(units: &str, header: &[&str]) -> Self {
        let mut text = String::new();
        writeln!(text, "# units: {units}").unwrap();
        writeln!(text, "{}", header.join(",")).unwrap();
        Self { text, columns: header.len() }
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns);
        let cells: Vec<String> = values.iter().map(|&v| fmt_num(v)).collect();
        writeln!(self.text, "{}", cells.join(",")).unwrap();
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Creates `dir` if needed and checks that it is writable.
pub fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: dir.display().to_string(), source };
    std::fs::create_dir_all(dir).map_err(io)?;
    if std::fs::metadata(dir).map_err(io)?.permissions().readonly() {
        return Err(CliError::Validation(format!("output directory {} is not writable", dir.display())));
    }
    Ok(())
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(path)
}
