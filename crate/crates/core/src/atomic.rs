use std::fs::File;
use std::io;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::error::{Error, Result};

/// Writes `path` through a temporary file in the same directory and renames
/// it into place, so readers never observe a partially written artifact.
pub fn write_atomic<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut File) -> io::Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    write(tmp.as_file_mut()).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Like [`write_atomic`] for writers that fail with a crate error; the file
/// is only put in place when `write` succeeds.
pub fn write_atomic_with<T, F>(path: &Path, write: F) -> Result<T>
where
    F: FnOnce(&mut io::BufWriter<&mut File>) -> Result<T>,
{
    let mut value = None;
    let mut failure = None;
    let outcome = write_atomic(path, |f| {
        let mut w = io::BufWriter::new(f);
        match write(&mut w) {
            Ok(v) => {
                value = Some(v);
                io::Write::flush(&mut w)
            }
            Err(e) => {
                let msg = e.to_string();
                failure = Some(e);
                Err(io::Error::other(msg))
            }
        }
    });
    match (outcome, failure, value) {
        (_, Some(e), _) => Err(e),
        (Err(e), None, _) => Err(e),
        (Ok(()), None, Some(v)) => Ok(v),
        (Ok(()), None, None) => unreachable!("a successful write yields a value"),
    }
}

pub fn write_string_atomic(path: &Path, contents: &str) -> Result<()> {
    write_atomic(path, |f| io::Write::write_all(f, contents.as_bytes()))
}
