//! Informed WSD (1NN among a lemma's candidate senses), uninformed sense
//! matching (ranking the whole inventory), and their metrics.

mod framework;
mod report;
mod significance;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::embed::VectorStore;
use crate::error::{Error, Result};
use crate::inventory::{SenseInventory, SenseKey};
use crate::pos::Pos;
use crate::propagate::PropagatedStore;

pub use framework::{
    dataset_of, parse_corpus_xml, parse_framework, parse_gold, Framework, FrameworkSentence, FrameworkToken, GoldKey,
    InstanceMeta,
};
pub use report::{format_table, DatasetRow};
pub use significance::{significance_test, TTest};

/// Read access to sense vectors by key.
pub trait SenseVectors: Sync {
    fn dim(&self) -> usize;
    fn sense_vector(&self, key: &str) -> Option<&[f64]>;
    /// All `(key, vector)` pairs, in key order.
    fn sense_entries(&self) -> Vec<(&str, &[f64])>;
}

impl SenseVectors for VectorStore {
    fn dim(&self) -> usize {
        VectorStore::dim(self)
    }

    fn sense_vector(&self, key: &str) -> Option<&[f64]> {
        self.vector(key)
    }

    fn sense_entries(&self) -> Vec<(&str, &[f64])> {
        self.iter().map(|(k, e)| (k, e.vector.as_slice())).collect()
    }
}

impl SenseVectors for PropagatedStore {
    fn dim(&self) -> usize {
        PropagatedStore::dim(self)
    }

    fn sense_vector(&self, key: &str) -> Option<&[f64]> {
        self.get(key).map(|e| &e.vector[..])
    }

    fn sense_entries(&self) -> Vec<(&str, &[f64])> {
        self.iter().map(|(k, e)| (k.as_str(), &e.vector[..])).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Similarity {
    #[default]
    Cosine,
    Dot,
}

impl std::str::FromStr for Similarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cosine" => Ok(Similarity::Cosine),
            "dot" => Ok(Similarity::Dot),
            _ => Err(format!("unknown similarity `{s}` (expected cosine or dot)")),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Similarity of `context` to `v`. Cosine against a zero vector is 0.
pub fn similarity(mode: Similarity, context: &[f64], v: &[f64]) -> f64 {
    match mode {
        Similarity::Dot => dot(context, v),
        Similarity::Cosine => {
            let d = norm(context) * norm(v);
            if d == 0.0 {
                0.0
            } else {
                dot(context, v) / d
            }
        }
    }
}

/// A target word with its contextual vector.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalInstance {
    pub id: String,
    pub lemma: String,
    pub pos: Pos,
    pub context: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InformedOptions {
    /// Predict the first sense when no candidate has a vector.
    pub first_sense_fallback: bool,
    pub similarity: Similarity,
}

impl Default for InformedOptions {
    fn default() -> Self {
        InformedOptions {
            first_sense_fallback: true,
            similarity: Similarity::Cosine,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub sense: SenseKey,
    /// `None` when the fallback decided.
    pub score: Option<f64>,
}

/// Nearest candidate sense of the instance's lemma. Candidates are scanned in
/// sense-number order and only a strictly better score replaces the current
/// best, so ties go to the lowest sense number. Candidates without a vector
/// are skipped.
pub fn disambiguate_informed<S: SenseVectors + ?Sized>(
    inst: &EvalInstance,
    store: &S,
    inv: &SenseInventory,
    opts: InformedOptions,
) -> Result<Prediction> {
    let candidates = inv.candidates(&inst.lemma, inst.pos);
    if candidates.is_empty() {
        return Err(Error::UnscorableInstance {
            id: inst.id.clone(),
            reason: format!("no candidate senses for {}/{}", inst.lemma, inst.pos),
        });
    }
    let mut best: Option<(&SenseKey, f64)> = None;
    for key in candidates {
        let Some(v) = store.sense_vector(key.as_str()) else {
            continue;
        };
        let s = similarity(opts.similarity, &inst.context, v);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((key, s));
        }
    }
    match best {
        Some((key, s)) => Ok(Prediction {
            sense: key.clone(),
            score: Some(s),
        }),
        None if opts.first_sense_fallback => Ok(Prediction {
            sense: candidates[0].clone(),
            score: None,
        }),
        None => Err(Error::UnscorableInstance {
            id: inst.id.clone(),
            reason: "no candidate sense has a vector".to_string(),
        }),
    }
}

/// Pre-collected sense vectors for ranking the whole inventory.
pub struct UsmIndex<'a> {
    entries: Vec<(&'a str, &'a [f64])>,
    norms: Vec<f64>,
    similarity: Similarity,
}

impl<'a> UsmIndex<'a> {
    pub fn new<S: SenseVectors + ?Sized>(store: &'a S, similarity: Similarity) -> UsmIndex<'a> {
        let entries = store.sense_entries();
        let norms = entries.iter().map(|(_, v)| norm(v)).collect();
        UsmIndex {
            entries,
            norms,
            similarity,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Top-`k` senses by similarity, ties broken by ascending key.
    pub fn rank(&self, context: &[f64], k: usize) -> Result<Vec<(String, f64)>> {
        if k < 1 {
            return Err(Error::Argument("k must be at least 1".to_string()));
        }
        let cnorm = norm(context);
        let mut scored: Vec<(f64, usize)> = self
            .entries
            .iter()
            .zip(&self.norms)
            .enumerate()
            .map(|(i, ((_, v), n))| {
                let s = match self.similarity {
                    Similarity::Dot => dot(context, v),
                    Similarity::Cosine => {
                        let d = cnorm * n;
                        if d == 0.0 {
                            0.0
                        } else {
                            dot(context, v) / d
                        }
                    }
                };
                (s, i)
            })
            .collect();
        // Entries are in key order, so the index breaks ties lexicographically.
        let order = |a: &(f64, usize), b: &(f64, usize)| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1));
        let k = k.min(scored.len());
        if k < scored.len() {
            scored.select_nth_unstable_by(k - 1, order);
            scored.truncate(k);
        }
        scored.sort_unstable_by(order);
        Ok(scored
            .into_iter()
            .map(|(s, i)| (self.entries[i].0.to_string(), s))
            .collect())
    }
}

/// Ranks every sense of the store against one instance.
pub fn rank_usm<S: SenseVectors + ?Sized>(
    inst: &EvalInstance,
    store: &S,
    k: usize,
    similarity: Similarity,
) -> Result<Vec<(String, f64)>> {
    UsmIndex::new(store, similarity).rank(&inst.context, k)
}

/// Per-instance outcome and aggregate metrics. `ids` and `correct` follow
/// the gold order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub instances: usize,
    pub f1: f64,
    pub k: Option<usize>,
    pub p_at_k: Option<f64>,
    pub mrr: Option<f64>,
    pub ids: Vec<String>,
    pub correct: Vec<bool>,
    /// Reciprocal rank per instance, when rankings were scored.
    pub reciprocal_ranks: Option<Vec<f64>>,
    pub hits_at_k: Option<Vec<bool>>,
    pub warnings: Vec<String>,
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    if n == 0 {
        0.0
    } else {
        values.sum::<f64>() / n as f64
    }
}

/// Scores predictions (and optionally rankings, truncated to `k`) against
/// gold. Every gold instance counts; a missing prediction counts as wrong.
pub fn score(
    predictions: &HashMap<String, SenseKey>,
    rankings: Option<&HashMap<String, Vec<String>>>,
    gold: &GoldKey,
    k: usize,
) -> Result<EvalReport> {
    if k < 1 {
        return Err(Error::Argument("k must be at least 1".to_string()));
    }
    let mut warnings = Vec::new();
    let mut ids = Vec::with_capacity(gold.len());
    let mut correct = Vec::with_capacity(gold.len());
    let mut rr = Vec::new();
    let mut hits = Vec::new();
    for (id, keys) in gold {
        ids.push(id.clone());
        match predictions.get(id) {
            Some(p) => correct.push(keys.contains(p)),
            None => {
                warnings.push(format!("no prediction for {id}; counted wrong"));
                correct.push(false);
            }
        }
        if let Some(rankings) = rankings {
            let ranking = rankings.get(id).map(Vec::as_slice).unwrap_or_default();
            if !rankings.contains_key(id) {
                warnings.push(format!("no ranking for {id}; counted as a miss"));
            }
            let best = ranking.iter().position(|r| keys.iter().any(|g| g.as_str() == r));
            rr.push(best.map_or(0.0, |r| 1.0 / (r + 1) as f64));
            hits.push(best.is_some_and(|r| r < k));
        }
    }
    let f1 = mean(correct.iter().map(|&c| if c { 1.0 } else { 0.0 }));
    let (p_at_k, mrr, reciprocal_ranks, hits_at_k) = if rankings.is_some() {
        (
            Some(mean(hits.iter().map(|&h| if h { 1.0 } else { 0.0 }))),
            Some(mean(rr.iter().copied())),
            Some(rr),
            Some(hits),
        )
    } else {
        (None, None, None, None)
    };
    Ok(EvalReport {
        instances: ids.len(),
        f1,
        k: rankings.map(|_| k),
        p_at_k,
        mrr,
        ids,
        correct,
        reciprocal_ranks,
        hits_at_k,
        warnings,
    })
}

/// Builds evaluation instances from framework metadata and a store of
/// context vectors keyed by instance id. Instances without a context vector
/// are reported by id.
pub fn attach_contexts(instances: &[InstanceMeta], contexts: &VectorStore) -> (Vec<EvalInstance>, Vec<String>) {
    let mut out = Vec::with_capacity(instances.len());
    let mut missing = Vec::new();
    for meta in instances {
        match contexts.vector(&meta.id) {
            Some(v) => out.push(EvalInstance {
                id: meta.id.clone(),
                lemma: meta.lemma.clone(),
                pos: meta.pos,
                context: v.to_vec(),
            }),
            None => missing.push(meta.id.clone()),
        }
    }
    (out, missing)
}

/// Informed WSD over many instances in parallel. Unscorable instances are
/// returned as warnings and left without a prediction.
pub fn predict_informed<S: SenseVectors + ?Sized>(
    instances: &[EvalInstance],
    store: &S,
    inv: &SenseInventory,
    opts: InformedOptions,
) -> (HashMap<String, SenseKey>, Vec<String>) {
    let results: Vec<(String, Result<Prediction>)> = instances
        .par_iter()
        .map(|inst| (inst.id.clone(), disambiguate_informed(inst, store, inv, opts)))
        .collect();
    let mut preds = HashMap::with_capacity(results.len());
    let mut warnings = Vec::new();
    for (id, r) in results {
        match r {
            Ok(p) => {
                preds.insert(id, p.sense);
            }
            Err(e) => warnings.push(e.to_string()),
        }
    }
    (preds, warnings)
}

/// Top-k sense keys per instance id.
pub type Rankings = HashMap<String, Vec<String>>;

/// USM over many instances in parallel: the top-1 sense is the prediction
/// and the top-`k` list is the ranking.
pub fn predict_usm<S: SenseVectors + ?Sized>(
    instances: &[EvalInstance],
    store: &S,
    k: usize,
    similarity: Similarity,
) -> Result<(HashMap<String, SenseKey>, Rankings)> {
    let index = UsmIndex::new(store, similarity);
    let ranked: Vec<(String, Vec<(String, f64)>)> = instances
        .par_iter()
        .map(|inst| index.rank(&inst.context, k).map(|r| (inst.id.clone(), r)))
        .collect::<Result<_>>()?;
    let mut preds = HashMap::with_capacity(ranked.len());
    let mut rankings = HashMap::with_capacity(ranked.len());
    for (id, r) in ranked {
        if let Some((top, _)) = r.first() {
            preds.insert(id.clone(), SenseKey::parse(top)?);
        }
        rankings.insert(id, r.into_iter().map(|(key, _)| key).collect());
    }
    Ok((preds, rankings))
}
