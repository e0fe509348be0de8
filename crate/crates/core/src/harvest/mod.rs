//! Annotating monosemous words in pre-tagged corpora.
//!
//! A harvest scans sentences for lemma/POS pairs with exactly one sense in
//! the inventory, drops entity-flagged matches unless allowlisted, and keeps
//! at most `cap` sentences per sense. Annotation runs in parallel over
//! document batches; the cap is applied afterwards in a single sequential
//! pass over the input order, so output never depends on the worker count.

mod coverage;
mod tagger;

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::inventory::{SenseInventory, SenseKey};
use crate::pos::Pos;

pub use coverage::{coverage_stats, CoverageAccumulator, CoverageReport};
pub use tagger::NaiveTagger;

/// One token of a tagged sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenRecord {
    pub surface: String,
    pub lemma: String,
    /// `None` for tokens outside the four open classes (`"x"` on the wire).
    #[serde(with = "token_pos")]
    pub pos: Option<Pos>,
    /// Byte offsets into the sentence text, end exclusive.
    #[serde(rename = "span")]
    pub char_span: [usize; 2],
    #[serde(rename = "ent", default)]
    pub is_entity: bool,
}

mod token_pos {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::pos::Pos;

    pub fn serialize<S: Serializer>(pos: &Option<Pos>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(pos.map(Pos::tag_str).unwrap_or("x"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Pos>, D::Error> {
        let tag = String::deserialize(d)?;
        match tag.as_str() {
            "x" => Ok(None),
            other => other
                .parse::<Pos>()
                .map(Some)
                .map_err(|_| serde::de::Error::custom(format!("unknown pos `{other}`"))),
        }
    }
}

/// A sense annotation over tokens `first..=last`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub first: usize,
    pub last: usize,
    pub sense: SenseKey,
}

/// A tagged sentence, optionally carrying sense annotations. The same type is
/// used for harvest input (annotations absent) and output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    #[serde(rename = "doc")]
    pub doc_id: String,
    #[serde(rename = "sent")]
    pub sent_id: String,
    pub text: String,
    pub tokens: Vec<TokenRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<Annotation>,
}

impl AnnotatedSentence {
    /// Checks token spans and annotation ranges; lowercases lemmas.
    pub fn validate(&mut self) -> std::result::Result<(), String> {
        for (i, t) in self.tokens.iter_mut().enumerate() {
            let [s, e] = t.char_span;
            if s >= e || e > self.text.len() || !self.text.is_char_boundary(s) || !self.text.is_char_boundary(e) {
                return Err(format!("token {i} has invalid span [{s},{e}]"));
            }
            if t.lemma.is_empty() || t.lemma.contains(char::is_whitespace) {
                return Err(format!("token {i} has unusable lemma {:?}", t.lemma));
            }
            if t.lemma.chars().any(char::is_uppercase) {
                t.lemma = t.lemma.to_lowercase();
            }
        }
        let mut end = 0;
        for a in &self.annotations {
            if a.first > a.last || a.last >= self.tokens.len() || (a.first < end && end > 0) {
                return Err(format!(
                    "annotation [{}, {}] is out of range or overlapping",
                    a.first, a.last
                ));
            }
            end = a.last + 1;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sentences always serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapStrategy {
    /// The first `cap` occurrences in stream order.
    First,
    /// A uniform sample of `cap` occurrences per sense (reservoir sampling
    /// with a per-sense generator derived from `seed`). Holds the annotated
    /// corpus in memory.
    Reservoir { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarvestConfig {
    pub cap: usize,
    pub cap_strategy: CapStrategy,
    /// `(lemma, pos)` pairs whose inventory sense is itself an entity.
    pub entity_lemma_allowlist: HashSet<(String, Pos)>,
    pub min_sentence_tokens: usize,
    pub max_sentence_tokens: usize,
    /// Documents annotated per parallel batch.
    pub batch_docs: usize,
}

impl Default for HarvestConfig {
    fn default() -> Self {
        HarvestConfig {
            cap: 100,
            cap_strategy: CapStrategy::First,
            entity_lemma_allowlist: HashSet::new(),
            min_sentence_tokens: 5,
            max_sentence_tokens: 128,
            batch_docs: 64,
        }
    }
}

impl HarvestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cap < 1 {
            return Err(Error::Argument("cap must be at least 1".to_string()));
        }
        if self.min_sentence_tokens > self.max_sentence_tokens {
            return Err(Error::Argument(format!(
                "min_sentence_tokens ({}) exceeds max_sentence_tokens ({})",
                self.min_sentence_tokens, self.max_sentence_tokens
            )));
        }
        Ok(())
    }
}

/// Reads an allowlist TSV of `lemma<TAB>pos` lines. Blank lines and `#`
/// comments are ignored.
pub fn load_entity_allowlist(path: &Path) -> Result<HashSet<(String, Pos)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (lemma, pos) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(path, i + 1, "expected `lemma<TAB>pos`"))?;
        let pos: Pos = pos
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, i + 1, format!("unknown pos `{pos}`")))?;
        out.insert((lemma.to_lowercase(), pos));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HarvestStats {
    pub docs_read: usize,
    pub docs_skipped: usize,
    pub lines_malformed: usize,
    pub sentences_read: usize,
    pub sentences_out_of_bounds: usize,
    pub monosemous_matches: usize,
    pub polysemous_matches: usize,
    pub entity_discarded: usize,
    pub cap_discarded: usize,
    pub sentences_emitted: usize,
    pub annotations_emitted: usize,
}

impl HarvestStats {
    fn absorb(&mut self, o: &HarvestStats) {
        self.docs_read += o.docs_read;
        self.docs_skipped += o.docs_skipped;
        self.lines_malformed += o.lines_malformed;
        self.sentences_read += o.sentences_read;
        self.sentences_out_of_bounds += o.sentences_out_of_bounds;
        self.monosemous_matches += o.monosemous_matches;
        self.polysemous_matches += o.polysemous_matches;
        self.entity_discarded += o.entity_discarded;
        self.cap_discarded += o.cap_discarded;
        self.sentences_emitted += o.sentences_emitted;
        self.annotations_emitted += o.annotations_emitted;
    }
}

/// Decision of the entity filter for one matched span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityDecision {
    Keep,
    Discard,
}

/// Discards a match when any of its tokens is entity-flagged, unless the
/// sense's own lemma/POS is on the allowlist.
pub fn entity_filter(span: &[TokenRecord], sense: &SenseKey, cfg: &HarvestConfig) -> EntityDecision {
    if !span.iter().any(|t| t.is_entity) {
        return EntityDecision::Keep;
    }
    if cfg
        .entity_lemma_allowlist
        .contains(&(sense.lemma().to_string(), sense.pos()))
    {
        EntityDecision::Keep
    } else {
        EntityDecision::Discard
    }
}

/// Finds monosemous matches in one sentence, before any cap is applied.
/// Multi-word lemmas are matched greedily, longest first; a polysemous match
/// still consumes its tokens. Returns `None` when the sentence has no
/// surviving annotation or falls outside the length bounds.
pub fn annotate_sentence(
    inv: &SenseInventory,
    sentence: &AnnotatedSentence,
    cfg: &HarvestConfig,
    stats: &mut HarvestStats,
) -> Option<AnnotatedSentence> {
    stats.sentences_read += 1;
    let n = sentence.tokens.len();
    if n < cfg.min_sentence_tokens || n > cfg.max_sentence_tokens {
        stats.sentences_out_of_bounds += 1;
        return None;
    }
    let max_len = inv.max_lemma_tokens().max(1);
    let mut annotations = Vec::new();
    let mut lemma = String::new();
    let mut i = 0;
    while i < n {
        let mut matched = 0;
        for len in (1..=max_len.min(n - i)).rev() {
            let span = &sentence.tokens[i..i + len];
            lemma.clear();
            for (j, t) in span.iter().enumerate() {
                if j > 0 {
                    lemma.push('_');
                }
                lemma.push_str(&t.lemma);
            }
            let last_pos = span[len - 1].pos;
            let first_pos = span[0].pos;
            let pos = [last_pos, first_pos]
                .into_iter()
                .flatten()
                .find(|&p| inv.contains_lemma(&lemma, p));
            let Some(pos) = pos else {
                continue;
            };
            matched = len;
            let candidates = inv.candidates(&lemma, pos);
            if candidates.len() != 1 {
                stats.polysemous_matches += 1;
                break;
            }
            stats.monosemous_matches += 1;
            let sense = &candidates[0];
            match entity_filter(span, sense, cfg) {
                EntityDecision::Keep => annotations.push(Annotation {
                    first: i,
                    last: i + len - 1,
                    sense: sense.clone(),
                }),
                EntityDecision::Discard => stats.entity_discarded += 1,
            }
            break;
        }
        i += matched.max(1);
    }
    if annotations.is_empty() {
        return None;
    }
    Some(AnnotatedSentence {
        annotations,
        ..sentence.clone()
    })
}

/// Sequential per-sense cap over a stream of annotated sentences.
#[derive(Debug)]
pub struct CapFilter {
    cap: usize,
    seen: HashMap<SenseKey, usize>,
}

impl CapFilter {
    pub fn new(cap: usize) -> Result<CapFilter> {
        if cap < 1 {
            return Err(Error::Argument("cap must be at least 1".to_string()));
        }
        Ok(CapFilter {
            cap,
            seen: HashMap::new(),
        })
    }

    /// Keeps the annotations whose sense has been seen fewer than `cap`
    /// times so far; returns `None` if nothing is left.
    pub fn apply(&mut self, mut sentence: AnnotatedSentence) -> Option<AnnotatedSentence> {
        sentence.annotations.retain(|a| {
            let n = self.seen.entry(a.sense.clone()).or_insert(0);
            *n += 1;
            *n <= self.cap
        });
        (!sentence.annotations.is_empty()).then_some(sentence)
    }
}

/// Keeps at most `k` annotations per sense, the first ones in stream order.
pub fn subset_by_cap<I>(corpus: I, k: usize) -> Result<impl Iterator<Item = AnnotatedSentence>>
where
    I: IntoIterator<Item = AnnotatedSentence>,
{
    let mut filter = CapFilter::new(k)?;
    Ok(corpus.into_iter().filter_map(move |s| filter.apply(s)))
}

fn reservoir_selection(corpus: &[AnnotatedSentence], cap: usize, seed: u64) -> HashSet<(usize, usize)> {
    // Occurrences of each sense in stream order, as (sentence, annotation).
    let mut by_sense: HashMap<&SenseKey, Vec<(usize, usize)>> = HashMap::new();
    for (si, s) in corpus.iter().enumerate() {
        for (ai, a) in s.annotations.iter().enumerate() {
            by_sense.entry(&a.sense).or_default().push((si, ai));
        }
    }
    let mut keep = HashSet::new();
    for (sense, occurrences) in by_sense {
        let digest = Sha256::new()
            .chain_update(seed.to_le_bytes())
            .chain_update(sense.as_str().as_bytes())
            .finalize();
        let mut rng = ChaCha8Rng::from_seed(digest.into());
        let mut reservoir: Vec<(usize, usize)> = Vec::with_capacity(cap);
        for (i, occ) in occurrences.into_iter().enumerate() {
            if i < cap {
                reservoir.push(occ);
            } else {
                let j = rng.gen_range(0..=i);
                if j < cap {
                    reservoir[j] = occ;
                }
            }
        }
        keep.extend(reservoir);
    }
    keep
}

/// Harvests an in-memory sequence of tagged sentences.
pub fn harvest_sentences(
    inv: &SenseInventory,
    sentences: &[AnnotatedSentence],
    cfg: &HarvestConfig,
) -> Result<(Vec<AnnotatedSentence>, HarvestStats)> {
    cfg.validate()?;
    let mut stats = HarvestStats::default();
    let annotated: Vec<(Option<AnnotatedSentence>, HarvestStats)> = sentences
        .par_iter()
        .map(|s| {
            let mut st = HarvestStats::default();
            let mut s = s.clone();
            let out = match s.validate() {
                Ok(()) => annotate_sentence(inv, &s, cfg, &mut st),
                Err(_) => {
                    st.lines_malformed += 1;
                    None
                }
            };
            (out, st)
        })
        .collect();
    let mut candidates = Vec::new();
    for (s, st) in annotated {
        stats.absorb(&st);
        candidates.extend(s);
    }
    let out = apply_cap(candidates, cfg, &mut stats)?;
    Ok((out, stats))
}

fn apply_cap(
    candidates: Vec<AnnotatedSentence>,
    cfg: &HarvestConfig,
    stats: &mut HarvestStats,
) -> Result<Vec<AnnotatedSentence>> {
    let before: usize = candidates.iter().map(|s| s.annotations.len()).sum();
    let out: Vec<AnnotatedSentence> = match cfg.cap_strategy {
        CapStrategy::First => subset_by_cap(candidates, cfg.cap)?.collect(),
        CapStrategy::Reservoir { seed } => {
            let keep = reservoir_selection(&candidates, cfg.cap, seed);
            candidates
                .into_iter()
                .enumerate()
                .filter_map(|(si, mut s)| {
                    let mut ai = 0;
                    s.annotations.retain(|_| {
                        ai += 1;
                        keep.contains(&(si, ai - 1))
                    });
                    (!s.annotations.is_empty()).then_some(s)
                })
                .collect()
        }
    };
    let after: usize = out.iter().map(|s| s.annotations.len()).sum();
    stats.cap_discarded += before - after;
    stats.sentences_emitted += out.len();
    stats.annotations_emitted += after;
    Ok(out)
}

/// One document's worth of input lines, or the reason it was skipped.
struct DocBatch {
    sentences: Vec<AnnotatedSentence>,
    malformed: usize,
}

/// Groups JSONL lines into documents by consecutive `doc` value. A line that
/// fails to parse or validate poisons the document it appears in.
fn read_documents<'a, R: BufRead + 'a>(reader: R, origin: &'a Path) -> impl Iterator<Item = Result<DocBatch>> + 'a {
    let mut lines = reader.lines();
    let mut pending: Option<(Option<String>, DocBatch)> = None;
    let mut done = false;
    std::iter::from_fn(move || loop {
        if done {
            return pending.take().map(|(_, d)| Ok(d));
        }
        let line = match lines.next() {
            None => {
                done = true;
                continue;
            }
            Some(Err(e)) => return Some(Err(Error::io(origin, e))),
            Some(Ok(l)) => l,
        };
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<AnnotatedSentence>(&line)
            .map_err(|e| e.to_string())
            .and_then(|mut s| s.validate().map(|_| s));
        let doc = parsed.as_ref().ok().map(|s| s.doc_id.clone());
        let same_doc = match (&pending, &doc) {
            (Some((Some(cur), _)), Some(d)) => cur == d,
            // Unparseable lines belong to the document being read.
            (Some(_), None) => true,
            _ => false,
        };
        let flushed = if same_doc || pending.is_none() {
            None
        } else {
            pending.take()
        };
        let (cur_doc, batch) = pending.get_or_insert_with(|| {
            (
                doc.clone(),
                DocBatch {
                    sentences: Vec::new(),
                    malformed: 0,
                },
            )
        });
        if cur_doc.is_none() {
            *cur_doc = doc;
        }
        match parsed {
            Ok(s) => batch.sentences.push(s),
            Err(_) => batch.malformed += 1,
        }
        if let Some((_, d)) = flushed {
            return Some(Ok(d));
        }
    })
}

/// Streams a JSONL corpus through the harvest, writing annotated sentences as
/// JSONL. Documents are annotated in parallel batches of `cfg.batch_docs`.
pub fn harvest_jsonl<R: BufRead, W: Write>(
    inv: &SenseInventory,
    reader: R,
    origin: &Path,
    cfg: &HarvestConfig,
    mut out: W,
) -> Result<HarvestStats> {
    cfg.validate()?;
    let mut stats = HarvestStats::default();
    let mut filter = CapFilter::new(cfg.cap)?;
    let mut held = Vec::new();
    let mut docs = read_documents(reader, origin);
    let batch_size = cfg.batch_docs.max(1);
    loop {
        let mut batch = Vec::with_capacity(batch_size);
        for doc in docs.by_ref().take(batch_size) {
            batch.push(doc?);
        }
        if batch.is_empty() {
            break;
        }
        let annotated: Vec<(Vec<AnnotatedSentence>, HarvestStats)> = batch
            .into_par_iter()
            .map(|doc| {
                let mut st = HarvestStats {
                    docs_read: 1,
                    ..HarvestStats::default()
                };
                if doc.malformed > 0 {
                    st.docs_skipped = 1;
                    st.lines_malformed = doc.malformed;
                    return (Vec::new(), st);
                }
                let out = doc
                    .sentences
                    .iter()
                    .filter_map(|s| annotate_sentence(inv, s, cfg, &mut st))
                    .collect();
                (out, st)
            })
            .collect();
        for (sentences, st) in annotated {
            stats.absorb(&st);
            for s in sentences {
                match cfg.cap_strategy {
                    CapStrategy::First => {
                        let n = s.annotations.len();
                        match filter.apply(s) {
                            Some(kept) => {
                                stats.cap_discarded += n - kept.annotations.len();
                                stats.sentences_emitted += 1;
                                stats.annotations_emitted += kept.annotations.len();
                                writeln!(out, "{}", kept.to_json()).map_err(|e| Error::io(origin, e))?;
                            }
                            None => stats.cap_discarded += n,
                        }
                    }
                    CapStrategy::Reservoir { .. } => held.push(s),
                }
            }
        }
    }
    if let CapStrategy::Reservoir { .. } = cfg.cap_strategy {
        for s in apply_cap(held, cfg, &mut stats)? {
            writeln!(out, "{}", s.to_json()).map_err(|e| Error::io(origin, e))?;
        }
    }
    out.flush().map_err(|e| Error::io(origin, e))?;
    Ok(stats)
}

/// Reads an annotated JSONL corpus (harvest output).
pub fn read_corpus(path: &Path) -> Result<Vec<AnnotatedSentence>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut s: AnnotatedSentence =
            serde_json::from_str(&line).map_err(|e| Error::parse(path, i + 1, e.to_string()))?;
        s.validate().map_err(|m| Error::parse(path, i + 1, m))?;
        out.push(s);
    }
    Ok(out)
}

pub fn write_corpus<W: Write>(corpus: &[AnnotatedSentence], mut w: W) -> std::io::Result<()> {
    for s in corpus {
        writeln!(w, "{}", s.to_json())?;
    }
    w.flush()
}

/// Occurrence ids (`sense#n`) for every annotation, in corpus order.
pub fn occurrence_ids(corpus: &[AnnotatedSentence]) -> Vec<String> {
    let mut counts: HashMap<&SenseKey, usize> = HashMap::new();
    let mut out = Vec::new();
    for s in corpus {
        for a in &s.annotations {
            let n = counts.entry(&a.sense).or_insert(0);
            out.push(crate::embed::occurrence_id(a.sense.as_str(), *n));
            *n += 1;
        }
    }
    out
}
