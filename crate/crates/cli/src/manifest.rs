//! Run manifests written next to every output file.

use std::path::{Path, PathBuf};

use faldpc::artifact::sha256_hex;
use serde::Serialize;

use crate::{CliResult, Failure};

#[derive(Debug, Clone, Serialize)]
pub struct InputFile {
    pub path: PathBuf,
    pub sha256: String,
}

impl InputFile {
    pub fn new(path: &Path, bytes: &[u8]) -> Self {
        Self {
            path: path.to_path_buf(),
            sha256: sha256_hex(bytes),
        }
    }
}

/// Everything needed to rerun a subcommand and get the same bytes. No
/// timestamps or host details, so the manifest itself is reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub inputs: Vec<InputFile>,
    pub artifact_hash: Option<String>,
    pub outputs: Vec<InputFile>,
}

#[derive(Serialize)]
struct Versioned<'a> {
    tool: &'static str,
    version: &'static str,
    #[serde(flatten)]
    manifest: &'a RunManifest,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

impl RunManifest {
    /// Writes `<out>.manifest.json`.
    pub fn write_next_to(&self, out: &Path) -> CliResult<()> {
        let doc = Versioned {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            manifest: self,
        };
        let text = serde_json::to_string_pretty(&doc)? + "\n";
        let path = manifest_path(out);
        std::fs::write(&path, text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
    }
}
