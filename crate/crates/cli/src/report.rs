//! Deterministic machine-readable output.
//!
//! Reports are JSON objects with sorted keys. Every float is rounded to 12
//! significant digits before serialization, so reruns of the same
//! configuration produce byte-identical output even when a parallel
//! reduction reorders the last bits. Nothing time- or host-dependent goes
//! into a report.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::CliError;

/// Rounds to 12 significant digits. Identity for zero and non-finite values.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses back")
}

/// JSON number with report rounding; non-finite values become null.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(round_sig(x))
    } else {
        Value::Null
    }
}

/// Complex value as an {im, re} object.
pub fn complex(z: Complex64) -> Value {
    json!({ "im": num(z.im), "re": num(z.re) })
}

/// CSV cell for a float: rounded, shortest decimal form, `.` separator.
pub fn cell(x: f64) -> String {
    format!("{}", round_sig(x))
}

/// A report under construction. `serde_json::Map` keeps keys sorted.
pub struct Report {
    root: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, formula: &str) -> Report {
        let mut root = Map::new();
        root.insert("command".into(), json!(command));
        root.insert("formula".into(), json!(formula));
        Report { root }
    }

    /// Echo of every resolved configuration key, as given.
    pub fn inputs(&mut self, cfg: &RunConfig) -> &mut Self {
        let mut inputs = Map::new();
        for (k, v) in cfg.entries() {
            inputs.insert(k.to_string(), json!(v));
        }
        self.root.insert("inputs".into(), Value::Object(inputs));
        self
    }

    pub fn set(&mut self, key: &str, value: Value) -> &mut Self {
        self.root.insert(key.to_string(), value);
        self
    }

    /// Serializes with a trailing newline and writes to `out` or stdout.
    pub fn emit(&self, out: Option<&Path>) -> Result<(), CliError> {
        let text = format!("{}\n", serde_json::to_string_pretty(&Value::Object(self.root.clone()))
            .expect("report serializes"));
        match out {
            Some(path) => fs::write(path, text)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

/// Writes a CSV sidecar: header row, comma separators, `.` decimals.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}
