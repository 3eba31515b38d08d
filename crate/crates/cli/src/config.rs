//! Flat key=value run configuration.
//!
//! Every subcommand declares a schema of keys. Values resolve in three
//! layers: schema defaults, then a config file given with `--config`, then
//! command-line `--key value` overrides. Unknown keys and out-of-range
//! values are rejected with the list of valid keys, so a typo never turns
//! into a silently ignored setting.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::CliError;

/// Admissible values of one key.
#[derive(Clone, Copy, Debug)]
pub enum Check {
    /// Integer in the inclusive range.
    IntRange(i64, i64),
    /// Float in the inclusive range.
    FloatRange(f64, f64),
    /// One of the listed words.
    OneOf(&'static [&'static str]),
    /// Free text (paths, comma lists); validated by the consumer.
    Free,
}

/// One key of a subcommand's schema. `default: None` marks an optional key
/// that may stay unset.
#[derive(Clone, Copy, Debug)]
pub struct KeySpec {
    pub name: &'static str,
    pub default: Option<&'static str>,
    pub check: Check,
    pub help: &'static str,
}

/// Resolved configuration: every schema key with a default is present.
#[derive(Clone, Debug)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
    schema: &'static [KeySpec],
}

impl RunConfig {
    /// Layers defaults, the optional config file, and command-line
    /// overrides, validating every value against the schema.
    pub fn resolve(
        schema: &'static [KeySpec],
        file: Option<&Path>,
        overrides: &[(String, String)],
    ) -> Result<RunConfig, CliError> {
        let mut values = BTreeMap::new();
        for spec in schema {
            if let Some(d) = spec.default {
                values.insert(spec.name.to_string(), d.to_string());
            }
        }
        if let Some(path) = file {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config file {}: {e}", path.display()))
            })?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(CliError::Usage(format!(
                        "config line {} is not key=value: '{line}'",
                        lineno + 1
                    )));
                };
                let key = normalize(key.trim());
                check_known(schema, &key)?;
                values.insert(key, value.trim().to_string());
            }
        }
        for (key, value) in overrides {
            let key = normalize(key);
            check_known(schema, &key)?;
            values.insert(key, value.clone());
        }
        let config = RunConfig { values, schema };
        for spec in schema {
            if let Some(raw) = config.values.get(spec.name) {
                validate(spec, raw)?;
            }
        }
        Ok(config)
    }

    /// Integer value of a key that has a default.
    pub fn int(&self, key: &str) -> i64 {
        self.raw(key).parse().expect("validated at resolve time")
    }

    /// Float value of a key that has a default.
    pub fn float(&self, key: &str) -> f64 {
        self.raw(key).parse().expect("validated at resolve time")
    }

    /// Text value of a key that has a default.
    pub fn text(&self, key: &str) -> &str {
        self.raw(key)
    }

    /// Value of an optional key.
    pub fn get(&self, key: &str) -> Option<&str> {
        debug_assert!(self.schema.iter().any(|s| s.name == key), "key {key} not in schema");
        self.values.get(key).map(|s| s.as_str())
    }

    /// Every resolved key and value, for the report's inputs echo.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn raw(&self, key: &str) -> &str {
        debug_assert!(self.schema.iter().any(|s| s.name == key), "key {key} not in schema");
        self.values.get(key).unwrap_or_else(|| panic!("key {key} has no default and no value"))
    }
}

/// Command-line keys accept hyphens in place of underscores.
fn normalize(key: &str) -> String {
    key.replace('-', "_")
}

fn check_known(schema: &[KeySpec], key: &str) -> Result<(), CliError> {
    if schema.iter().any(|s| s.name == key) {
        return Ok(());
    }
    let names: Vec<&str> = schema.iter().map(|s| s.name).collect();
    Err(CliError::Usage(format!(
        "unknown key '{key}'; valid keys: {}",
        names.join(", ")
    )))
}

fn validate(spec: &KeySpec, raw: &str) -> Result<(), CliError> {
    match spec.check {
        Check::IntRange(lo, hi) => {
            let v: i64 = raw.parse().map_err(|_| {
                CliError::Usage(format!("key '{}' needs an integer, got '{raw}'", spec.name))
            })?;
            if v < lo || v > hi {
                return Err(CliError::Usage(format!(
                    "key '{}' = {v} outside the range [{lo}, {hi}]",
                    spec.name
                )));
            }
        }
        Check::FloatRange(lo, hi) => {
            let v: f64 = raw.parse().map_err(|_| {
                CliError::Usage(format!("key '{}' needs a number, got '{raw}'", spec.name))
            })?;
            if !v.is_finite() || v < lo || v > hi {
                return Err(CliError::Usage(format!(
                    "key '{}' = {v} outside the range [{lo}, {hi}]",
                    spec.name
                )));
            }
        }
        Check::OneOf(words) => {
            if !words.contains(&raw) {
                return Err(CliError::Usage(format!(
                    "key '{}' must be one of {}, got '{raw}'",
                    spec.name,
                    words.join("|")
                )));
            }
        }
        Check::Free => {}
    }
    Ok(())
}

/// Usage text for a schema: one line per key with default, range, and help.
pub fn describe(schema: &[KeySpec]) -> String {
    let mut out = String::new();
    for spec in schema {
        let range = match spec.check {
            Check::IntRange(lo, hi) => format!("integer in [{lo}, {hi}]"),
            Check::FloatRange(lo, hi) => format!("number in [{lo:e}, {hi:e}]"),
            Check::OneOf(words) => words.join("|"),
            Check::Free => "text".to_string(),
        };
        let default = match spec.default {
            Some(d) => format!("default {d}"),
            None => "optional".to_string(),
        };
        let _ = writeln!(out, "  {:<18} {range}; {default}. {}", spec.name, spec.help);
    }
    out
}
