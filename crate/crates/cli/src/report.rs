use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{ExperimentConfig, Format};
use crate::error::{CliError, ErrorCode};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Row-oriented trace flattened into CSV.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Trace {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: ExperimentConfig,
    pub results: Value,
    pub trace: Trace,
    pub version: String,
    pub wall_time_s: f64,
}

impl Report {
    /// Everything that must be identical across runs with the same config.
    pub fn payload(&self) -> String {
        serde_json::json!({ "results": self.results, "trace": self.trace }).to_string()
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn emit(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(|e| CliError::new(ErrorCode::Io, e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::new(ErrorCode::Io, e.to_string());
            w.write_record(&report.trace.columns).map_err(io)?;
            for row in &report.trace.rows {
                w.write_record(row.iter().map(cell)).map_err(io)?;
            }
            w.into_inner().map_err(|e| CliError::new(ErrorCode::Io, e.to_string()))
        }
    }
}
