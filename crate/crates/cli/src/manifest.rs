//! Run manifests and the file access that feeds them.

use std::io::Write;
use std::path::Path;

use blinkforge::pipeline::PipelineConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to rerun a command and check its outputs. Holds no
/// timestamps or thread counts, so reruns write identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    pub library_version: String,
    /// Command-line arguments after the program name.
    pub args: Vec<String>,
    pub seed: u64,
    /// Effective pipeline configuration after defaults were filled in.
    pub config: PipelineConfig,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Manifest location for a primary output.
pub fn manifest_path(output: &str) -> String {
    format!("{output}.manifest.json")
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &str, bytes: &[u8]) -> Result<()> {
    let io = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    let target = Path::new(path);
    let dir = target
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(target).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn read_bytes(path: &str) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

/// File access for one run, recording a digest of everything read and
/// written.
#[derive(Debug, Default)]
pub struct Run {
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

impl Run {
    pub fn read(&mut self, path: &str) -> Result<String> {
        let bytes = read_bytes(path)?;
        self.inputs.push(FileDigest {
            path: path.to_string(),
            sha256: sha256_hex(&bytes),
        });
        String::from_utf8(bytes).map_err(|_| CliError::data(path, "file is not UTF-8 text"))
    }

    pub fn write(&mut self, path: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(path, bytes)?;
        self.outputs.push(FileDigest {
            path: path.to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    /// Writes the manifest beside the first output.
    pub fn finish(self, args: Vec<String>, seed: u64, config: PipelineConfig) -> Result<()> {
        let Some(primary) = self.outputs.first() else {
            return Ok(());
        };
        let path = manifest_path(&primary.path);
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            library_version: blinkforge::VERSION.to_string(),
            args,
            seed,
            config,
            inputs: self.inputs,
            outputs: self.outputs,
        };
        let mut json = serde_json::to_vec_pretty(&manifest)
            .map_err(|e| CliError::Internal(format!("manifest serialization failed: {e}")))?;
        json.push(b'\n');
        write_atomic(&path, &json)
    }
}
