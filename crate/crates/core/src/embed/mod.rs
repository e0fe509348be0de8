//! Keyed vector stores and sense-embedding aggregation.
//!
//! A sense embedding is the arithmetic mean of the contextual vectors of the
//! sense's occurrences. Vectors are kept unnormalized; similarity code
//! normalizes at query time.

pub mod hexfloat;
pub mod vex;

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub use vex::{read_store, write_store};

#[derive(Debug, Clone, PartialEq)]
pub struct StoreEntry {
    pub vector: Vec<f64>,
    pub count: u64,
}

/// Map from key to a fixed-dimension vector plus its occurrence count.
/// Keys iterate in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorStore {
    dim: usize,
    entries: BTreeMap<String, StoreEntry>,
}

impl VectorStore {
    pub fn new(dim: usize) -> VectorStore {
        assert!(dim > 0, "vector stores need a positive dimension");
        VectorStore {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get(&self, key: &str) -> Option<&StoreEntry> {
        self.entries.get(key)
    }

    pub fn vector(&self, key: &str) -> Option<&[f64]> {
        self.entries.get(key).map(|e| e.vector.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &StoreEntry)> {
        self.entries.iter().map(|(k, e)| (k.as_str(), e))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Inserts or replaces an entry after checking dimension, finiteness and
    /// count. Keys may not contain tabs or line breaks.
    pub fn insert(&mut self, key: impl Into<String>, vector: Vec<f64>, count: u64) -> Result<()> {
        let key = key.into();
        check_vector(&key, &vector, self.dim)?;
        if key.is_empty() || key.contains(['\t', '\n', '\r']) {
            return Err(Error::Argument(format!("unusable store key {key:?}")));
        }
        if count == 0 {
            return Err(Error::Argument(format!("count of `{key}` must be positive")));
        }
        self.entries.insert(key, StoreEntry { vector, count });
        Ok(())
    }

    /// Keeps only entries whose key satisfies `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&str) -> bool) {
        self.entries.retain(|k, _| keep(k));
    }

    pub fn scale(&mut self, factor: f64) {
        for e in self.entries.values_mut() {
            e.vector.iter_mut().for_each(|v| *v *= factor);
        }
    }
}

fn check_vector(key: &str, vector: &[f64], dim: usize) -> Result<()> {
    if vector.len() != dim {
        return Err(Error::DimensionMismatch {
            key: key.to_string(),
            expected: dim,
            found: vector.len(),
        });
    }
    if vector.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { key: key.to_string() });
    }
    Ok(())
}

/// Incremental mean computation. Sums are accumulated in `f64` in arrival
/// order, so a fixed input order gives bit-identical output.
#[derive(Debug)]
pub struct Aggregator {
    dim: usize,
    sums: BTreeMap<String, (Vec<f64>, u64)>,
}

impl Aggregator {
    pub fn new(dim: usize) -> Aggregator {
        assert!(dim > 0, "vector stores need a positive dimension");
        Aggregator {
            dim,
            sums: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, key: &str, vector: &[f64]) -> Result<()> {
        check_vector(key, vector, self.dim)?;
        match self.sums.get_mut(key) {
            Some((sum, n)) => {
                sum.iter_mut().zip(vector).for_each(|(s, v)| *s += v);
                *n += 1;
            }
            None => {
                self.sums.insert(key.to_string(), (vector.to_vec(), 1));
            }
        }
        Ok(())
    }

    pub fn finish(self) -> VectorStore {
        let entries = self
            .sums
            .into_iter()
            .map(|(k, (mut sum, n))| {
                let count = n as f64;
                sum.iter_mut().for_each(|s| *s /= count);
                (k, StoreEntry { vector: sum, count: n })
            })
            .collect();
        VectorStore { dim: self.dim, entries }
    }
}

/// Mean vector per key over a stream of `(key, vector)` occurrences.
pub fn aggregate<K, V, I>(dim: usize, occurrences: I) -> Result<VectorStore>
where
    K: AsRef<str>,
    V: AsRef<[f64]>,
    I: IntoIterator<Item = (K, V)>,
{
    let mut agg = Aggregator::new(dim);
    for (k, v) in occurrences {
        agg.push(k.as_ref(), v.as_ref())?;
    }
    Ok(agg.finish())
}

/// Count-weighted union of two stores. Keys present in only one store are
/// copied unchanged.
pub fn merge(a: &VectorStore, b: &VectorStore) -> Result<VectorStore> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            key: "<store>".to_string(),
            expected: a.dim,
            found: b.dim,
        });
    }
    let mut entries = a.entries.clone();
    for (key, eb) in &b.entries {
        match entries.get_mut(key) {
            Some(ea) => {
                let (na, nb) = (ea.count as f64, eb.count as f64);
                let n = ea.count + eb.count;
                let total = n as f64;
                for (x, y) in ea.vector.iter_mut().zip(&eb.vector) {
                    *x = (*x * na + *y * nb) / total;
                }
                ea.count = n;
            }
            None => {
                entries.insert(key.clone(), eb.clone());
            }
        }
    }
    Ok(VectorStore { dim: a.dim, entries })
}

const OCCURRENCE_SEP: char = '#';

/// Occurrence id for the `index`-th occurrence (0-based, stream order) of a sense.
pub fn occurrence_id(sense: &str, index: usize) -> String {
    format!("{sense}{OCCURRENCE_SEP}{index}")
}

pub fn split_occurrence_id(id: &str) -> Option<(&str, usize)> {
    let (sense, idx) = id.rsplit_once(OCCURRENCE_SEP)?;
    Some((sense, idx.parse().ok()?))
}

/// Aggregates an occurrence store (keys `sense#index`, count 1) into sense
/// embeddings, summing each sense's occurrences in ascending index order.
pub fn aggregate_occurrences(occurrences: &VectorStore) -> Result<VectorStore> {
    let mut ordered = Vec::with_capacity(occurrences.len());
    for (id, entry) in occurrences.iter() {
        let (sense, idx) = split_occurrence_id(id)
            .ok_or_else(|| Error::Argument(format!("`{id}` is not an occurrence id (sense#index)")))?;
        ordered.push((sense, idx, entry.vector.as_slice()));
    }
    ordered.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    aggregate(occurrences.dim(), ordered.into_iter().map(|(s, _, v)| (s, v)))
}
