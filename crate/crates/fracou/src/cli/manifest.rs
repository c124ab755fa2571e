//! Reproducibility manifests written next to every output table.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Sidecar recording what produced an output file. Re-running the recorded
/// command (same config hash, same seed, same version) reproduces the
/// numeric columns byte for byte; only `wall_time_s` varies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
    pub command: String,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(config_hash: String, seed: u64, command: String) -> Self {
        Self {
            config_hash,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            wall_time_s: 0.0,
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, table_path: &Path) -> Result<PathBuf> {
        let path = manifest_path(table_path);
        std::fs::write(&path, serde_json::to_string_pretty(self).expect("manifest serializes"))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| crate::error::Error::Config(format!("manifest parse error: {e}")))
    }
}

/// `<table>.manifest.json` next to the table file.
pub fn manifest_path(table_path: &Path) -> PathBuf {
    let mut name = table_path.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    table_path.with_file_name(name)
}

/// SHA-256 of the canonical config rendering, in lowercase hex.
pub fn config_hash(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
