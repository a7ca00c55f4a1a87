use essc::detect::{SeedRecord, SummaryStats};
use serde::Serialize;

use crate::sweep::SweepRow;

/// Machine-readable record of one invocation.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    /// The command line as given.
    pub command: Vec<String>,
    /// Parameters after defaults were applied.
    pub parameters: serde_json::Value,
    pub duration_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<SummaryStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_log: Option<Vec<SeedRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<SweepRow>>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            command,
            parameters: serde_json::Value::Null,
            duration_seconds: 0.0,
            summary: None,
            seed_log: None,
            metrics: None,
            rows: None,
        }
    }
}
