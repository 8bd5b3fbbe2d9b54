use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Serialize)]
pub struct OutputFile {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: String,
    pub config_name: String,
    pub config_sha256: String,
    pub outputs: Vec<OutputFile>,
    pub wall_time_s: f64,
}

/// Collects the files of one command and writes the manifest last.
pub struct Outputs {
    dir: PathBuf,
    files: Vec<OutputFile>,
    start: Instant,
}

impl Outputs {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Outputs {
            dir: dir.to_path_buf(),
            files: Vec::new(),
            start: Instant::now(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        write_atomic(&path, bytes)?;
        self.files.push(OutputFile {
            file: name.to_string(),
            bytes: bytes.len(),
            sha256: sha256_hex(bytes),
        });
        Ok(path)
    }

    pub fn finish(self, command: &str, config_name: &str, config_toml: &str) -> Result<Vec<String>, CliError> {
        let names: Vec<String> = self.files.iter().map(|f| f.file.clone()).collect();
        let m = RunManifest {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            command: command.to_string(),
            config_name: config_name.to_string(),
            config_sha256: sha256_hex(config_toml.as_bytes()),
            outputs: self.files,
            wall_time_s: self.start.elapsed().as_secs_f64(),
        };
        let json = serde_json::to_string_pretty(&m).expect("manifest serializes");
        write_atomic(&self.dir.join(format!("manifest_{command}.json")), json.as_bytes())?;
        Ok(names)
    }
}
