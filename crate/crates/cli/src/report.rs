//! The JSON report envelope every non-streaming subcommand prints: a single
//! object with a fixed field order, versioned schema, and the inputs, spec,
//! and seed that produced the result. The timing field is informational and
//! excluded from determinism guarantees.

use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Serialize)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pred: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Serialize)]
pub struct Report<S: Serialize, T: Serialize> {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub inputs: Inputs,
    pub spec: S,
    pub result: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub timing_ms: f64,
}

impl<S: Serialize, T: Serialize> Report<S, T> {
    pub fn print(&self) -> std::io::Result<()> {
        use std::io::Write;
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(self).expect("report serializes")
        )
    }
}
