use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Provenance written next to every output file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub caps: BTreeMap<String, usize>,
    pub artifacts: Vec<Artifact>,
    pub duration_ms: u128,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects artifacts during a run and writes the manifest at the end.
pub struct Recorder {
    started: Instant,
    pub group: Option<String>,
    pub seed: Option<u64>,
    pub caps: BTreeMap<String, usize>,
    artifacts: Vec<Artifact>,
    first_path: Option<PathBuf>,
    primary: Option<PathBuf>,
}

impl Recorder {
    pub fn new() -> Self {
        Recorder {
            started: Instant::now(),
            group: None,
            seed: None,
            caps: BTreeMap::new(),
            artifacts: Vec::new(),
            first_path: None,
            primary: None,
        }
    }

    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> std::io::Result<()> {
        fs::write(path, bytes)?;
        self.artifacts.push(Artifact {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        });
        self.first_path.get_or_insert_with(|| path.to_path_buf());
        Ok(())
    }

    /// Like [`Recorder::write`], and names the manifest after this file.
    pub fn write_primary(&mut self, path: &Path, bytes: &[u8]) -> std::io::Result<()> {
        self.write(path, bytes)?;
        self.primary = Some(path.to_path_buf());
        Ok(())
    }

    /// `<primary output>.manifest.json`; nothing is written when the run produced no files.
    pub fn finish(self) -> std::io::Result<Option<PathBuf>> {
        let Some(first) = self.primary.or(self.first_path) else {
            return Ok(None);
        };
        let mut name = first.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        let path = first.with_file_name(name);
        let manifest = RunManifest {
            command: std::env::args().collect(),
            group: self.group,
            seed: self.seed,
            caps: self.caps,
            artifacts: self.artifacts,
            duration_ms: self.started.elapsed().as_millis(),
        };
        let mut text = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(Some(path))
    }
}
