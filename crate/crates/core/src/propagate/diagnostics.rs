//! Diagnostics over propagated stores: vector uniqueness and projection export.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use super::{PropagatedStore, Provenance};
use crate::embed::hexfloat::format_hex;
use crate::error::Result;
use crate::inventory::SenseInventory;

/// How two sense vectors are considered equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Uniqueness {
    /// Bitwise equality of every component.
    Exact,
    /// Every component differs by at most the given amount.
    Tolerance(f64),
}

/// Fraction of senses whose vector is shared with no other sense.
/// An empty store has ratio 1.
pub fn uniqueness_ratio(store: &PropagatedStore) -> f64 {
    uniqueness_ratio_with(store, Uniqueness::Exact)
}

pub fn uniqueness_ratio_with(store: &PropagatedStore, mode: Uniqueness) -> f64 {
    let vectors: Vec<&Arc<[f64]>> = store.iter().map(|(_, e)| &e.vector).collect();
    if vectors.is_empty() {
        return 1.0;
    }
    let unique = match mode {
        Uniqueness::Exact => count_unique_exact(&vectors),
        Uniqueness::Tolerance(tol) => count_unique_tolerance(&vectors, tol),
    };
    unique as f64 / vectors.len() as f64
}

fn bits_hash(v: &[f64]) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    for x in v {
        x.to_bits().hash(&mut h);
    }
    h.finish()
}

fn bits_eq(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

fn count_unique_exact(vectors: &[&Arc<[f64]>]) -> usize {
    // Buckets keyed by a hash of the bit pattern; each bucket holds
    // (representative, multiplicity) pairs so collisions are resolved exactly.
    let mut buckets: HashMap<u64, Vec<(&[f64], usize)>> = HashMap::new();
    for v in vectors {
        let bucket = buckets.entry(bits_hash(v)).or_default();
        match bucket.iter_mut().find(|(rep, _)| bits_eq(rep, v)) {
            Some((_, n)) => *n += 1,
            None => bucket.push((v, 1)),
        }
    }
    buckets.values().flatten().filter(|(_, n)| *n == 1).count()
}

fn count_unique_tolerance(vectors: &[&Arc<[f64]>], tol: f64) -> usize {
    let tol = tol.abs();
    let mut order: Vec<usize> = (0..vectors.len()).collect();
    order.sort_by(|&a, &b| vectors[a][0].total_cmp(&vectors[b][0]));
    let mut shared = vec![false; vectors.len()];
    for (pos, &i) in order.iter().enumerate() {
        let vi = &vectors[i];
        for &j in &order[pos + 1..] {
            let vj = &vectors[j];
            if vj[0] - vi[0] > tol {
                break;
            }
            if vi.iter().zip(vj.iter()).all(|(x, y)| (x - y).abs() <= tol) {
                shared[i] = true;
                shared[j] = true;
            }
        }
    }
    shared.iter().filter(|s| !**s).count()
}

fn has_observed_member(store: &PropagatedStore, inv: &SenseInventory, id: crate::inventory::SynsetId) -> bool {
    inv.synset(id).is_some_and(|s| {
        s.members.iter().any(|k| {
            store
                .get(k.as_str())
                .is_some_and(|e| e.provenance == Provenance::Observed)
        })
    })
}

/// Writes one row per sense for external 2-D projection tools:
/// `sense_key  lexname  provenance  source  v0 v1 ...`, where `source` is the
/// synset the vector was taken from (`-` for observed and lexname vectors).
pub fn export_projection(store: &PropagatedStore, inv: &SenseInventory, path: &Path) -> Result<()> {
    crate::atomic::write_atomic(path, |f| {
        let mut w = std::io::BufWriter::new(f);
        writeln!(w, "sense_key\tlexname\tprovenance\tsource\tvector")?;
        let mut buf = String::new();
        for (key, entry) in store.iter() {
            let Some(synset) = inv.synset_of(key) else {
                continue;
            };
            let source = match entry.provenance {
                Provenance::FromSynset => synset.id.to_string(),
                Provenance::FromHypernym => {
                    let hypers: Vec<String> = synset
                        .hypernyms
                        .iter()
                        .filter(|h| has_observed_member(store, inv, **h))
                        .map(|h| h.to_string())
                        .collect();
                    if hypers.is_empty() {
                        "-".to_string()
                    } else {
                        hypers.join(",")
                    }
                }
                Provenance::Observed | Provenance::FromLexname => "-".to_string(),
            };
            buf.clear();
            for (i, v) in entry.vector.iter().enumerate() {
                if i > 0 {
                    buf.push(' ');
                }
                format_hex(*v, &mut buf);
            }
            writeln!(w, "{key}\t{}\t{}\t{source}\t{buf}", synset.lexname, entry.provenance)?;
        }
        w.flush()
    })
}
