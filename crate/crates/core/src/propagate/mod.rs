//! Full-coverage propagation of sense embeddings over the inventory graph.
//!
//! Starting from observed sense vectors, every other sense receives, in order
//! of preference:
//!
//! 1. its own observed vector,
//! 2. the embedding of its synset (mean of the synset's observed senses),
//! 3. the mean of the embeddings of its synset's *direct* hypernyms that have
//!    one (no transitive ascent),
//! 4. the embedding of its lexname (mean of all synset embeddings from step 2
//!    that share the lexname).
//!
//! Inferred senses share their vector through an `Arc`, so duplicates cost
//! one allocation per distinct vector.

mod diagnostics;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use crate::embed::{self, VectorStore};
use crate::error::{Error, Result};
use crate::inventory::{Lexname, SenseInventory, SenseKey, SynsetId};

pub use diagnostics::{export_projection, uniqueness_ratio, uniqueness_ratio_with, Uniqueness};

/// Which rule produced a sense vector. Ordered from most to least specific.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Observed,
    FromSynset,
    FromHypernym,
    FromLexname,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Observed => "observed",
            Provenance::FromSynset => "from_synset",
            Provenance::FromHypernym => "from_hypernym",
            Provenance::FromLexname => "from_lexname",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "observed" => Ok(Provenance::Observed),
            "from_synset" => Ok(Provenance::FromSynset),
            "from_hypernym" => Ok(Provenance::FromHypernym),
            "from_lexname" => Ok(Provenance::FromLexname),
            _ => Err(format!("unknown provenance `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagatedEntry {
    pub vector: Arc<[f64]>,
    pub provenance: Provenance,
    /// Occurrence count for observed senses, 1 for inferred ones.
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagatedStore {
    dim: usize,
    entries: BTreeMap<SenseKey, PropagatedEntry>,
    synset_vectors: BTreeMap<SynsetId, Arc<[f64]>>,
    lexname_vectors: BTreeMap<Lexname, Arc<[f64]>>,
    ignored_seed_keys: usize,
}

impl PropagatedStore {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&PropagatedEntry> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SenseKey, &PropagatedEntry)> {
        self.entries.iter()
    }

    /// Step-1 synset embeddings (synsets with at least one observed sense).
    /// Empty when the store was read back from disk.
    pub fn synset_vectors(&self) -> &BTreeMap<SynsetId, Arc<[f64]>> {
        &self.synset_vectors
    }

    pub fn lexname_vectors(&self) -> &BTreeMap<Lexname, Arc<[f64]>> {
        &self.lexname_vectors
    }

    /// Seed keys that were not senses of the inventory and were skipped.
    pub fn ignored_seed_keys(&self) -> usize {
        self.ignored_seed_keys
    }

    pub fn provenance_counts(&self) -> BTreeMap<Provenance, usize> {
        let mut counts = BTreeMap::new();
        for e in self.entries.values() {
            *counts.entry(e.provenance).or_insert(0) += 1;
        }
        counts
    }

    /// The observed senses as a plain vector store.
    pub fn observed_subset(&self) -> VectorStore {
        let mut store = VectorStore::new(self.dim);
        for (k, e) in &self.entries {
            if e.provenance == Provenance::Observed {
                store
                    .insert(k.as_str(), e.vector.to_vec(), e.count)
                    .expect("entries were validated");
            }
        }
        store
    }

    pub fn to_vector_store(&self) -> VectorStore {
        let mut store = VectorStore::new(self.dim);
        for (k, e) in &self.entries {
            store
                .insert(k.as_str(), e.vector.to_vec(), e.count)
                .expect("entries were validated");
        }
        store
    }

    /// Writes the vectors as VEX and the provenance sidecar next to them.
    pub fn write(&self, vex_path: &Path) -> Result<PathBuf> {
        embed::write_store(&self.to_vector_store(), vex_path)?;
        let sidecar = sidecar_path(vex_path);
        crate::atomic::write_atomic(&sidecar, |f| {
            let mut w = std::io::BufWriter::new(f);
            for (k, e) in &self.entries {
                writeln!(w, "{k}\t{}", e.provenance)?;
            }
            w.flush()
        })?;
        Ok(sidecar)
    }
}

/// `<store>.prov.tsv`
pub fn sidecar_path(vex_path: &Path) -> PathBuf {
    let mut name = vex_path.file_name().unwrap_or_default().to_os_string();
    name.push(".prov.tsv");
    vex_path.with_file_name(name)
}

/// Reads a propagated store written by [`PropagatedStore::write`]. Synset and
/// lexname maps are not persisted and come back empty.
pub fn read_propagated(vex_path: &Path) -> Result<PropagatedStore> {
    let store = embed::read_store(vex_path)?;
    let sidecar = sidecar_path(vex_path);
    let file = std::fs::File::open(&sidecar).map_err(|e| Error::io(&sidecar, e))?;
    let mut provenance = BTreeMap::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(&sidecar, e))?;
        let (key, prov) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(&sidecar, i + 1, "expected `sense_key<TAB>provenance`"))?;
        let prov: Provenance = prov.parse().map_err(|m: String| Error::parse(&sidecar, i + 1, m))?;
        provenance.insert(key.to_string(), prov);
    }
    let mut entries = BTreeMap::new();
    for (key, e) in store.iter() {
        let prov = provenance
            .remove(key)
            .ok_or_else(|| Error::Integrity(format!("{key} has no provenance in {}", sidecar.display())))?;
        let key = SenseKey::parse(key)?;
        entries.insert(
            key,
            PropagatedEntry {
                vector: e.vector.clone().into(),
                provenance: prov,
                count: e.count,
            },
        );
    }
    if let Some(extra) = provenance.keys().next() {
        return Err(Error::Integrity(format!("{extra} has provenance but no vector")));
    }
    Ok(PropagatedStore {
        dim: store.dim(),
        entries,
        synset_vectors: BTreeMap::new(),
        lexname_vectors: BTreeMap::new(),
        ignored_seed_keys: 0,
    })
}

fn mean_of<'a>(dim: usize, vectors: impl IntoIterator<Item = &'a [f64]>) -> Option<Vec<f64>> {
    let mut sum = vec![0.0; dim];
    let mut n = 0usize;
    for v in vectors {
        sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
        n += 1;
    }
    if n == 0 {
        return None;
    }
    let n = n as f64;
    sum.iter_mut().for_each(|s| *s /= n);
    Some(sum)
}

/// Synset embedding = unweighted mean of the synset's observed sense vectors,
/// in member order. Synsets without observed members are absent.
pub fn synset_embeddings(store: &VectorStore, inv: &SenseInventory) -> BTreeMap<SynsetId, Vec<f64>> {
    let mut out = BTreeMap::new();
    for synset in inv.synsets() {
        let observed = synset.members.iter().filter_map(|k| store.vector(k.as_str()));
        if let Some(mean) = mean_of(store.dim(), observed) {
            out.insert(synset.id, mean);
        }
    }
    out
}

/// Lexname embedding = mean of the step-1 synset embeddings with that lexname,
/// in synset-id order.
pub fn lexname_embeddings(
    synset_vectors: &BTreeMap<SynsetId, Vec<f64>>,
    inv: &SenseInventory,
    dim: usize,
) -> BTreeMap<Lexname, Vec<f64>> {
    let mut grouped: BTreeMap<Lexname, Vec<&[f64]>> = BTreeMap::new();
    for (id, v) in synset_vectors {
        let lexname = inv.synset(*id).expect("synset ids come from the inventory").lexname;
        grouped.entry(lexname).or_default().push(v);
    }
    grouped
        .into_iter()
        .map(|(l, vs)| (l, mean_of(dim, vs).expect("groups are non-empty")))
        .collect()
}

pub fn propagate_full(store: &VectorStore, inv: &SenseInventory) -> Result<PropagatedStore> {
    if store.is_empty() {
        return Err(Error::Argument("cannot propagate from an empty seed store".to_string()));
    }
    let dim = store.dim();
    let ignored_seed_keys = store.keys().filter(|k| !inv.contains_sense(k)).count();

    let synset_vectors: BTreeMap<SynsetId, Arc<[f64]>> = synset_embeddings(store, inv)
        .into_iter()
        .map(|(id, v)| (id, Arc::from(v)))
        .collect();
    let lexname_vectors: BTreeMap<Lexname, Arc<[f64]>> = {
        let plain: BTreeMap<SynsetId, Vec<f64>> = synset_vectors.iter().map(|(id, v)| (*id, v.to_vec())).collect();
        lexname_embeddings(&plain, inv, dim)
            .into_iter()
            .map(|(l, v)| (l, Arc::from(v)))
            .collect()
    };

    let mut entries = BTreeMap::new();
    let mut uncoverable = BTreeSet::new();
    for synset in inv.synsets() {
        // Vector shared by this synset's unobserved members.
        let inferred: Option<(Arc<[f64]>, Provenance)> = if let Some(v) = synset_vectors.get(&synset.id) {
            Some((v.clone(), Provenance::FromSynset))
        } else {
            let hypers: Vec<&[f64]> = synset
                .hypernyms
                .iter()
                .filter_map(|h| synset_vectors.get(h).map(|v| &v[..]))
                .collect();
            match hypers.as_slice() {
                [] => lexname_vectors
                    .get(&synset.lexname)
                    .map(|v| (v.clone(), Provenance::FromLexname)),
                [single] => Some((Arc::from(*single), Provenance::FromHypernym)),
                many => Some((
                    Arc::from(mean_of(dim, many.iter().copied()).expect("non-empty")),
                    Provenance::FromHypernym,
                )),
            }
        };

        for key in &synset.members {
            let entry = match store.get(key.as_str()) {
                Some(e) => PropagatedEntry {
                    vector: Arc::from(e.vector.as_slice()),
                    provenance: Provenance::Observed,
                    count: e.count,
                },
                None => match &inferred {
                    Some((v, prov)) => PropagatedEntry {
                        vector: v.clone(),
                        provenance: *prov,
                        count: 1,
                    },
                    None => {
                        uncoverable.insert(synset.lexname);
                        continue;
                    }
                },
            };
            entries.insert(key.clone(), entry);
        }
    }

    if !uncoverable.is_empty() {
        return Err(Error::UncoverableLexname(
            uncoverable.into_iter().map(|l| l.name().to_string()).collect(),
        ));
    }
    debug_assert_eq!(entries.len(), inv.num_senses());

    Ok(PropagatedStore {
        dim,
        entries,
        synset_vectors,
        lexname_vectors,
        ignored_seed_keys,
    })
}
