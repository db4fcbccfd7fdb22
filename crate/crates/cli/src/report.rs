//! The JSON envelope shared by every subcommand.
//!
//! Object keys are emitted in sorted order and no field depends on the clock
//! or the environment beyond the resolved tolerance, so identical inputs and
//! flags give byte-identical reports.

use std::path::Path;

use serde::Serialize;
use serde_json::Value as Json;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Json,
    pub input_digest: String,
    pub results: Json,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub version: &'static str,
}

impl Report {
    pub fn new(command: Json, input_digest: String, results: Json, tolerance: f64) -> Self {
        Report {
            command,
            input_digest,
            results,
            seed: None,
            tolerance,
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn to_pretty(&self) -> String {
        // Round-tripping through `Value` sorts every nested object.
        let sorted = serde_json::to_value(self).expect("reports serialise");
        let mut text = serde_json::to_string_pretty(&sorted).expect("reports serialise");
        text.push('\n');
        text
    }

    /// Prints the report and, when asked, writes it to `out` as well.
    pub fn emit(&self, out: Option<&Path>) -> Result<(), CliError> {
        let text = self.to_pretty();
        if let Some(path) = out {
            write_file(path, &text)?;
        }
        print!("{text}");
        Ok(())
    }
}

/// Hex SHA-256 over the concatenation of `parts`.
pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
