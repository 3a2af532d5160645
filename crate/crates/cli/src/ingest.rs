//! Clustering file ingestion.
//!
//! Two formats:
//! * `labels` — UTF-8 text, one whitespace-free token per line; the node
//!   index is the 0-based position among retained lines. Blank lines and
//!   lines starting with `#` are ignored.
//! * `json` — an object with `n` and `assignment` (array of `n`
//!   non-negative integers); canonical form is not required on input.

use std::fs;
use std::path::Path;

use partition_metrics::Partition;
use serde::Deserialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum FileFormat {
    Labels,
    Json,
}

#[derive(Deserialize)]
struct JsonClustering {
    n: usize,
    assignment: Vec<u64>,
}

pub fn read_clustering(path: &Path, format: FileFormat) -> Result<Partition, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    match format {
        FileFormat::Labels => parse_labels(&text).map_err(|e| format!("{}: {e}", path.display())),
        FileFormat::Json => parse_json(&text).map_err(|e| format!("{}: {e}", path.display())),
    }
}

fn parse_labels(text: &str) -> Result<Partition, String> {
    let mut tokens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.split_whitespace().count() != 1 {
            return Err(format!(
                "line {}: expected one whitespace-free token, got {raw:?}",
                lineno + 1
            ));
        }
        tokens.push(line.to_string());
    }
    Partition::canonicalize(&tokens).map_err(|e| e.to_string())
}

fn parse_json(text: &str) -> Result<Partition, String> {
    let parsed: JsonClustering =
        serde_json::from_str(text).map_err(|e| format!("invalid clustering json: {e}"))?;
    if parsed.assignment.len() != parsed.n {
        return Err(format!(
            "assignment has {} entries but n = {}",
            parsed.assignment.len(),
            parsed.n
        ));
    }
    Partition::canonicalize(&parsed.assignment).map_err(|e| e.to_string())
}
