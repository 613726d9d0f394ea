//! Config-file loading and the effective-configuration echo.
//!
//! A config file is a flat JSON object whose keys match long flag names,
//! e.g. `{"batch-size": 32, "seed": 7, "feature": "tgt-length"}`. It is
//! named by `--config` or, failing that, the `CURBATCH_CONFIG` environment
//! variable. Flags given on the command line always win; the file only
//! fills gaps. After resolution every command echoes the configuration it
//! actually used to stderr as `# key=value` lines, so runs are easy to
//! replay from logs without polluting data outputs.

use std::env;
use std::fmt::Display;
use std::fs;
use std::path::Path;

use serde_json::{Map, Value};

use crate::{usage, CliError};

/// Parsed config file (possibly empty when none was named).
pub struct Config {
    values: Map<String, Value>,
}

impl Config {
    /// Loads `explicit` if given, else the `CURBATCH_CONFIG` file, else an
    /// empty config. A named file must exist and hold a JSON object.
    pub fn load(explicit: Option<&Path>) -> Result<Self, CliError> {
        let path = explicit
            .map(Path::to_path_buf)
            .or_else(|| env::var_os("CURBATCH_CONFIG").map(Into::into));
        let Some(path) = path else {
            return Ok(Self { values: Map::new() });
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| usage!("config {}: {e}", path.display()))?;
        let parsed: Value = serde_json::from_str(&text)
            .map_err(|e| usage!("config {}: {e}", path.display()))?;
        match parsed {
            Value::Object(values) => Ok(Self { values }),
            _ => Err(usage!(
                "config {}: expected a JSON object of flag values",
                path.display()
            )),
        }
    }

    /// String-valued key.
    pub fn string(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(other) => Err(usage!("config key {key:?}: expected a string, got {other}")),
        }
    }

    /// Unsigned integer key.
    pub fn u64(&self, key: &str) -> Result<Option<u64>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Number(n)) => n
                .as_u64()
                .map(Some)
                .ok_or_else(|| usage!("config key {key:?}: expected an unsigned integer")),
            Some(other) => Err(usage!(
                "config key {key:?}: expected an unsigned integer, got {other}"
            )),
        }
    }

    /// Unsigned 32-bit key.
    pub fn u32(&self, key: &str) -> Result<Option<u32>, CliError> {
        match self.u64(key)? {
            None => Ok(None),
            Some(v) => u32::try_from(v)
                .map(Some)
                .map_err(|_| usage!("config key {key:?}: {v} does not fit in 32 bits")),
        }
    }

    /// Boolean key.
    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.values.get(key) {
            None => Ok(false),
            Some(Value::Bool(b)) => Ok(*b),
            Some(other) => Err(usage!("config key {key:?}: expected a bool, got {other}")),
        }
    }
}

/// The configuration a command actually ran with, in echo order.
#[derive(Default)]
pub struct Effective {
    pairs: Vec<(String, String)>,
}

impl Effective {
    /// Records one effective setting.
    pub fn push(&mut self, key: &str, value: impl Display) {
        self.pairs.push((key.to_owned(), value.to_string()));
    }

    /// Records a setting only when it was set.
    pub fn push_opt(&mut self, key: &str, value: Option<impl Display>) {
        if let Some(value) = value {
            self.push(key, value);
        }
    }

    /// Writes the `# key=value` echo to stderr.
    pub fn echo(&self) {
        for (key, value) in &self.pairs {
            eprintln!("# {key}={value}");
        }
    }
}
