//! Machine-readable report envelope. With a fixed seed the serialized
//! report is byte-identical across runs except for `wall_time_ms`,
//! which is deliberately the last field.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::format::MatrixFile;

#[derive(Debug, Serialize)]
pub struct SchmidtVectors {
    pub x_re: Vec<Vec<f64>>,
    pub x_im: Vec<Vec<f64>>,
    pub y_re: Vec<Vec<f64>>,
    pub y_im: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum WitnessPayload {
    Matrix(MatrixFile),
    Schmidt(SchmidtVectors),
}

#[derive(Debug, Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub inputs_digest: String,
    pub verdict: String,
    /// Named margins and values; every verdict-relevant number appears
    /// here with the tolerance it was judged at in `tolerances`.
    pub values: Vec<(String, f64)>,
    pub tolerances: Vec<(String, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessPayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refuting_diagonal: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<MatrixFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub wall_time_ms: f64,
}

impl ReportEnvelope {
    pub fn new(command: &str, digest: String) -> Self {
        Self {
            command: command.to_string(),
            inputs_digest: digest,
            verdict: String::new(),
            values: Vec::new(),
            tolerances: Vec::new(),
            witness: None,
            refuting_diagonal: None,
            state: None,
            seed: None,
            wall_time_ms: 0.0,
        }
    }

    pub fn value(&mut self, name: &str, v: f64) -> &mut Self {
        self.values.push((name.to_string(), v));
        self
    }

    pub fn tolerance(&mut self, name: &str, v: f64) -> &mut Self {
        self.tolerances.push((name.to_string(), v));
        self
    }

    pub fn write_json(&self, path: &std::path::Path) -> Result<(), String> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| format!("report serialization failed: {e}"))?;
        std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))
    }
}

/// Hex SHA-256 over the raw bytes of the input files, in argument order.
pub fn digest_files(paths: &[&std::path::Path]) -> Result<String, String> {
    let mut hasher = Sha256::new();
    for path in paths {
        let bytes = std::fs::read(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        hasher.update(&bytes);
    }
    Ok(format!("sha256:{:x}", hasher.finalize()))
}

/// Hex SHA-256 over a parameter string (for commands without files).
pub fn digest_params(params: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(params.as_bytes());
    format!("sha256:{:x}", hasher.finalize())
}
