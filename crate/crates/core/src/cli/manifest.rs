//! JSON run manifests written next to each command's output.

use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: &'static str,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub config_sha256: String,
    pub config: serde_json::Value,
    pub summary: serde_json::Value,
}

/// Digest of a file, or of every file below a directory in sorted order.
pub fn digest(path: &Path) -> Result<FileDigest> {
    let mut hasher = Sha256::new();
    let mut bytes = 0u64;
    let mut files = Vec::new();
    collect_files(path, &mut files)?;
    let mut buf = vec![0u8; 1 << 16];
    for f in files {
        let mut file = File::open(&f).map_err(|e| Error::io(&f, e))?;
        loop {
            let n = file.read(&mut buf).map_err(|e| Error::io(&f, e))?;
            if n == 0 {
                break;
            }
            hasher.update(&buf[..n]);
            bytes += n as u64;
        }
    }
    Ok(FileDigest {
        path: path.to_path_buf(),
        bytes,
        sha256: hex::encode(hasher.finalize()),
    })
}

fn collect_files(path: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let meta = std::fs::metadata(path).map_err(|e| Error::io(path, e))?;
    if !meta.is_dir() {
        out.push(path.to_path_buf());
        return Ok(());
    }
    let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
        .map_err(|e| Error::io(path, e))?
        .map(|e| e.map(|e| e.path()).map_err(|err| Error::io(path, err)))
        .collect::<Result<_>>()?;
    entries.sort();
    for e in entries {
        collect_files(&e, out)?;
    }
    Ok(())
}

pub fn config_hash(config: &serde_json::Value) -> String {
    hex::encode(Sha256::digest(config.to_string().as_bytes()))
}

/// `<output>.manifest.json`
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

impl Manifest {
    pub fn write(&self, output: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifests serialize");
        crate::atomic::write_string_atomic(&manifest_path(output), &(text + "\n"))
    }
}
