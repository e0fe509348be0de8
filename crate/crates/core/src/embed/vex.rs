//! VEX v1: a line-oriented text format for keyed dense vectors.
//!
//! ```text
//! VEX 1 <dim>
//! <key>\t<v0> <v1> ... <v_{dim-1}>\t<count>
//! ```
//!
//! Records are written in lexicographic key order with hex-float components.
//! The reader also accepts decimal floats.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::hexfloat::{format_hex, parse_float};
use super::VectorStore;
use crate::error::{Error, Result};

pub const MAGIC: &str = "VEX";
pub const VERSION: u32 = 1;

pub fn read_store(path: impl AsRef<Path>) -> Result<VectorStore> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_store_from(BufReader::new(file), path)
}

/// Reads a store from any reader; `origin` is only used in error messages.
pub fn read_store_from<R: Read>(reader: R, origin: &Path) -> Result<VectorStore> {
    let reader = BufReader::new(reader);
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(line) => line.map_err(|e| Error::io(origin, e))?,
        None => return Err(Error::parse(origin, 1, "empty file, expected `VEX 1 <dim>` header")),
    };
    let dim = parse_header(&header).ok_or_else(|| Error::parse(origin, 1, format!("bad header `{header}`")))?;

    let mut store = VectorStore::new(dim);
    let mut vector = Vec::with_capacity(dim);
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line.map_err(|e| Error::io(origin, e))?;
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split('\t');
        let (Some(key), Some(values), Some(count), None) = (cols.next(), cols.next(), cols.next(), cols.next()) else {
            return Err(Error::parse(origin, lineno, "expected `key<TAB>values<TAB>count`"));
        };
        vector.clear();
        for token in values.split(' ').filter(|t| !t.is_empty()) {
            let v = parse_float(token)
                .ok_or_else(|| Error::parse(origin, lineno, format!("non-numeric or non-finite value `{token}`")))?;
            vector.push(v);
        }
        if vector.len() != dim {
            return Err(Error::parse(
                origin,
                lineno,
                format!("`{key}` has {} values, header says {dim}", vector.len()),
            ));
        }
        let count: u64 = count
            .parse()
            .ok()
            .filter(|&c| c >= 1)
            .ok_or_else(|| Error::parse(origin, lineno, format!("bad count `{count}`")))?;
        if store.contains(key) {
            return Err(Error::parse(origin, lineno, format!("duplicate key `{key}`")));
        }
        store
            .insert(key, vector.clone(), count)
            .map_err(|e| Error::parse(origin, lineno, e.to_string()))?;
    }
    Ok(store)
}

fn parse_header(line: &str) -> Option<usize> {
    let mut f = line.split(' ');
    if f.next()? != MAGIC || f.next()?.parse::<u32>().ok()? != VERSION {
        return None;
    }
    let dim: usize = f.next()?.parse().ok()?;
    (f.next().is_none() && dim > 0).then_some(dim)
}

pub fn write_store_to<W: Write>(store: &VectorStore, w: W) -> std::io::Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "{MAGIC} {VERSION} {}", store.dim())?;
    let mut buf = String::new();
    for (key, entry) in store.iter() {
        buf.clear();
        buf.push_str(key);
        buf.push('\t');
        for (i, v) in entry.vector.iter().enumerate() {
            if i > 0 {
                buf.push(' ');
            }
            format_hex(*v, &mut buf);
        }
        buf.push('\t');
        buf.push_str(&entry.count.to_string());
        buf.push('\n');
        w.write_all(buf.as_bytes())?;
    }
    w.flush()
}

pub fn write_store(store: &VectorStore, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    crate::atomic::write_atomic(path, |w| write_store_to(store, w))
}
