use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// What a subcommand produced: a JSON value, its plain-text rendering and
/// the exit code (0, or 2/3 when checks or some runs of a sweep failed).
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub code: u8,
}

impl Outcome {
    pub fn new(json: impl Serialize, text: String) -> CliResult<Self> {
        Ok(Self { json: to_value(json)?, text, code: 0 })
    }

    /// Exit 2 unless `ok`.
    pub fn failing(mut self, ok: bool) -> Self {
        if !ok {
            self.code = 2;
        }
        self
    }

    /// Exit 3 unless `ok`.
    pub fn runs_failing(mut self, ok: bool) -> Self {
        if !ok {
            self.code = 3;
        }
        self
    }
}

pub fn to_value(v: impl Serialize) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Io(format!("serializing output: {e}")))
}

/// Round-trip formatting, the same as the CSV writers.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn csv_row(values: &[f64]) -> String {
    values.iter().map(|v| num(*v)).collect::<Vec<_>>().join(",")
}
