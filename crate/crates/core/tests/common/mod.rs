//! Shared fixtures, generators and independent oracles for integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use monosense::embed::VectorStore;
use monosense::evaluate::{self, EvalInstance, GoldKey, Similarity};
use monosense::harvest::{AnnotatedSentence, TokenRecord};
use monosense::inventory::{Lexname, SenseInventory, SenseKey, Synset, SynsetId};
use monosense::propagate::Provenance;
use monosense::Pos;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// WordNet 3.0 database directory, when present (`scripts/fetch-wordnet.sh`).
pub fn wordnet_dir() -> Option<PathBuf> {
    let dir = std::env::var_os("MONOSENSE_WORDNET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| workspace_root().join("data/wordnet"));
    dir.join("data.noun").exists().then_some(dir)
}

pub fn toy_inventory() -> SenseInventory {
    monosense::inventory::load_tsv_inventory(fixtures().join("toy_inventory.tsv")).unwrap()
}

pub fn key(s: &str) -> SenseKey {
    SenseKey::parse(s).unwrap()
}

pub fn noun(offset: u32) -> SynsetId {
    SynsetId::new(Pos::Noun, offset)
}

/// A noun synset in lexicographer file `lex`; members are lemmas and get
/// keys `lemma%1:lex:00::`.
pub fn synset(offset: u32, lex: u8, lemmas: &[&str], hypernyms: &[u32]) -> Synset {
    Synset {
        id: noun(offset),
        members: lemmas.iter().map(|l| key(&format!("{l}%1:{lex:02}:00::"))).collect(),
        hypernyms: hypernyms.iter().map(|&h| noun(h)).collect(),
        lexname: Lexname::new(lex).unwrap(),
    }
}

pub fn store(dim: usize, entries: &[(&str, &[f64])]) -> VectorStore {
    let mut s = VectorStore::new(dim);
    for (k, v) in entries {
        s.insert(*k, v.to_vec(), 1).unwrap();
    }
    s
}

// ---------------------------------------------------------------------------
// Random inventories

const NOUN_LEXNAMES: [u8; 4] = [3, 5, 6, 14];
const VERB_LEXNAMES: [u8; 2] = [29, 35];

/// A random inventory of `n` synsets. Lemmas come from a small pool so that
/// some are polysemous; hypernyms point to earlier synsets of the same part
/// of speech.
pub fn random_inventory<R: Rng>(rng: &mut R, n: usize) -> SenseInventory {
    let pool: Vec<String> = (0..(n / 2).max(3)).map(|i| format!("w{i}")).collect();
    let mut synsets: Vec<Synset> = Vec::with_capacity(n);
    let mut used: HashMap<(String, u8, u8), u8> = HashMap::new();
    let mut by_pos: HashMap<Pos, Vec<SynsetId>> = HashMap::new();
    for i in 0..n {
        let pos = if rng.gen_bool(0.8) { Pos::Noun } else { Pos::Verb };
        let lex = match pos {
            Pos::Noun => *NOUN_LEXNAMES.choose(rng).unwrap(),
            _ => *VERB_LEXNAMES.choose(rng).unwrap(),
        };
        let ss_type = if pos == Pos::Noun { 1 } else { 2 };
        let id = SynsetId::new(pos, i as u32 + 1);
        let mut members = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let lemma = pool.choose(rng).unwrap().clone();
            let slot = used.entry((lemma.clone(), ss_type, lex)).or_insert(0);
            let k = key(&format!("{lemma}%{ss_type}:{lex:02}:{:02}::", *slot));
            *slot += 1;
            members.push(k);
        }
        let earlier = by_pos.entry(pos).or_default();
        let mut hypernyms = Vec::new();
        if !earlier.is_empty() {
            for _ in 0..rng.gen_range(0..=2) {
                let h = *earlier.choose(rng).unwrap();
                if !hypernyms.contains(&h) {
                    hypernyms.push(h);
                }
            }
        }
        earlier.push(id);
        synsets.push(Synset {
            id,
            members,
            hypernyms,
            lexname: Lexname::new(lex).unwrap(),
        });
    }
    SenseInventory::from_synsets(synsets, None).unwrap()
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Observes each sense independently with probability `p` (at least one).
pub fn random_seed<R: Rng>(rng: &mut R, inv: &SenseInventory, p: f64, dim: usize) -> VectorStore {
    let mut s = VectorStore::new(dim);
    let senses: Vec<&SenseKey> = inv.senses().collect();
    for k in &senses {
        if rng.gen_bool(p) {
            s.insert(k.as_str(), random_vector(rng, dim), rng.gen_range(1..5))
                .unwrap();
        }
    }
    if s.is_empty() {
        let k = senses.choose(rng).unwrap();
        s.insert(k.as_str(), random_vector(rng, dim), 1).unwrap();
    }
    s
}

// ---------------------------------------------------------------------------
// Brute-force propagation oracle

fn oracle_mean(vectors: &[Vec<f64>], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for v in vectors {
        for (o, x) in out.iter_mut().zip(v) {
            *o += x;
        }
    }
    let n = vectors.len() as f64;
    out.iter().map(|x| x / n).collect()
}

/// Expected vector and provenance for every sense, by key.
pub type Assignment = BTreeMap<String, (Vec<f64>, Provenance)>;

/// Rules 1-4 applied sense by sense, recomputing every intermediate
/// quantity from scratch. Errors with the sorted lexname names that no
/// observed synset covers.
pub fn brute_force_propagate(seed: &VectorStore, inv: &SenseInventory) -> Result<Assignment, Vec<String>> {
    let dim = seed.dim();
    let all: Vec<&Synset> = inv.synsets().collect();
    let find = |id: SynsetId| all.iter().find(|s| s.id == id).copied();
    let synset_vec = |s: &Synset| -> Option<Vec<f64>> {
        let obs: Vec<Vec<f64>> = s
            .members
            .iter()
            .filter_map(|m| seed.vector(m.as_str()).map(|v| v.to_vec()))
            .collect();
        (!obs.is_empty()).then(|| oracle_mean(&obs, dim))
    };
    let mut sorted_ids: Vec<SynsetId> = all.iter().map(|s| s.id).collect();
    sorted_ids.sort();

    let mut out = BTreeMap::new();
    let mut bad: Vec<String> = Vec::new();
    for s in &all {
        for m in &s.members {
            if let Some(v) = seed.vector(m.as_str()) {
                out.insert(m.to_string(), (v.to_vec(), Provenance::Observed));
                continue;
            }
            if let Some(v) = synset_vec(s) {
                out.insert(m.to_string(), (v, Provenance::FromSynset));
                continue;
            }
            let hyper: Vec<Vec<f64>> = s
                .hypernyms
                .iter()
                .filter_map(|h| find(*h).and_then(synset_vec))
                .collect();
            if !hyper.is_empty() {
                out.insert(m.to_string(), (oracle_mean(&hyper, dim), Provenance::FromHypernym));
                continue;
            }
            let lex: Vec<Vec<f64>> = sorted_ids
                .iter()
                .map(|id| find(*id).unwrap())
                .filter(|o| o.lexname == s.lexname)
                .filter_map(synset_vec)
                .collect();
            if lex.is_empty() {
                let name = s.lexname.name().to_string();
                if !bad.contains(&name) {
                    bad.push(name);
                }
            } else {
                out.insert(m.to_string(), (oracle_mean(&lex, dim), Provenance::FromLexname));
            }
        }
    }
    if bad.is_empty() {
        Ok(out)
    } else {
        bad.sort();
        Err(bad)
    }
}

// ---------------------------------------------------------------------------
// Named fixtures

/// C (observed) -> B (observed) -> A (unobserved, sole member a1).
pub fn chain_fixture() -> (SenseInventory, VectorStore) {
    let inv = SenseInventory::from_synsets(
        vec![
            synset(1, 6, &["c1"], &[]),
            synset(2, 6, &["b1", "b2"], &[1]),
            synset(3, 6, &["a1"], &[2]),
        ],
        None,
    )
    .unwrap();
    let seed = store(
        2,
        &[
            ("c1%1:06:00::", &[10.0, -10.0]),
            ("b1%1:06:00::", &[1.0, 2.0]),
            ("b2%1:06:00::", &[3.0, 6.0]),
        ],
    );
    (inv, seed)
}

/// One lexname whose unobserved senses all collapse to the lexname vector,
/// plus the unambiguous-sense vectors that break the cluster up.
pub fn duplicate_cluster_fixture() -> (SenseInventory, VectorStore, VectorStore) {
    let inv = SenseInventory::from_synsets(
        vec![
            synset(1, 6, &["tool"], &[]),
            synset(2, 6, &["hammer"], &[]),
            synset(3, 6, &["saw"], &[]),
            synset(4, 6, &["drill"], &[]),
            synset(5, 6, &["chisel"], &[]),
            synset(6, 6, &["wrench"], &[]),
        ],
        None,
    )
    .unwrap();
    let seed = store(3, &[("tool%1:06:00::", &[1.0, 0.0, 0.0])]);
    let extension = store(
        3,
        &[
            ("hammer%1:06:00::", &[0.0, 1.0, 0.0]),
            ("saw%1:06:00::", &[0.0, 0.0, 1.0]),
            ("drill%1:06:00::", &[0.5, 0.5, 0.0]),
        ],
    );
    (inv, seed, extension)
}

/// Adding the observed sense `s` makes the previously unique `y` copy it:
/// uniqueness drops from 5/8 to 4/8.
pub fn uniqueness_counterexample() -> (SenseInventory, VectorStore, (&'static str, Vec<f64>)) {
    let inv = SenseInventory::from_synsets(
        vec![
            synset(1, 6, &["z1", "z2"], &[]),
            synset(10, 14, &["w1", "w2"], &[]),
            synset(2, 6, &["s"], &[10]),
            synset(3, 6, &["y"], &[2]),
            synset(11, 6, &["t1"], &[10]),
            synset(12, 6, &["t2"], &[10]),
        ],
        None,
    )
    .unwrap();
    let seed = store(
        2,
        &[
            ("z1%1:06:00::", &[1.0, 0.0]),
            ("z2%1:06:00::", &[0.0, 1.0]),
            ("w1%1:14:00::", &[2.0, 1.0]),
            ("w2%1:14:00::", &[1.0, 3.0]),
        ],
    );
    (inv, seed, ("s%1:06:00::", vec![-1.0, 0.5]))
}

// ---------------------------------------------------------------------------
// Tagged sentences

/// `(surface, lemma, pos, is_entity)`; `pos` is a wire tag (`n`, `v`, `x`, ...).
pub fn tagged(doc: &str, sent: &str, words: &[(&str, &str, &str, bool)]) -> AnnotatedSentence {
    let mut text = String::new();
    let mut tokens = Vec::new();
    for (surface, lemma, pos, ent) in words {
        if !text.is_empty() {
            text.push(' ');
        }
        let start = text.len();
        text.push_str(surface);
        tokens.push(TokenRecord {
            surface: surface.to_string(),
            lemma: lemma.to_string(),
            pos: if *pos == "x" { None } else { Some(pos.parse().unwrap()) },
            char_span: [start, text.len()],
            is_entity: *ent,
        });
    }
    AnnotatedSentence {
        doc_id: doc.to_string(),
        sent_id: sent.to_string(),
        text,
        tokens,
        annotations: Vec::new(),
    }
}

/// Inventory with the monosemous `inception%1:04:00::` and `hit%1:04:00::`.
pub fn inception_inventory() -> SenseInventory {
    SenseInventory::from_synsets(
        vec![synset(1, 4, &["inception"], &[]), synset(2, 4, &["hit"], &[])],
        None,
    )
    .unwrap()
}

/// "Inception was a box-office hit", with Inception tagged as an entity.
pub fn inception_sentence() -> AnnotatedSentence {
    tagged(
        "film",
        "0",
        &[
            ("Inception", "inception", "n", true),
            ("was", "be", "v", false),
            ("a", "a", "x", false),
            ("box-office", "box-office", "a", false),
            ("hit", "hit", "n", false),
        ],
    )
}

// ---------------------------------------------------------------------------
// Evaluation fixtures and oracles

/// Random instances over the ambiguous lemmas of `inv`, with a store that
/// leaves some candidates without vectors.
pub fn random_wsd_case<R: Rng>(
    rng: &mut R,
    inv: &SenseInventory,
    n: usize,
    dim: usize,
) -> (Vec<EvalInstance>, VectorStore) {
    let lemmas: Vec<(String, Pos)> = inv
        .lemma_entries()
        .filter(|(_, _, c)| c.len() > 1)
        .map(|(l, p, _)| (l.to_string(), p))
        .collect();
    let mut s = VectorStore::new(dim);
    for k in inv.senses() {
        if rng.gen_bool(0.8) {
            s.insert(k.as_str(), random_vector(rng, dim), 1).unwrap();
        }
    }
    let instances = (0..n)
        .map(|i| {
            let (lemma, pos) = lemmas.choose(rng).unwrap().clone();
            EvalInstance {
                id: format!("rand.d000.s{i:04}.t000"),
                lemma,
                pos,
                context: random_vector(rng, dim),
            }
        })
        .collect();
    (instances, s)
}

/// Exhaustive argmax over all candidates: the first candidate (in sense
/// order) reaching the maximum score; first sense when none has a vector.
pub fn exhaustive_informed(inst: &EvalInstance, store: &VectorStore, inv: &SenseInventory) -> SenseKey {
    let candidates = inv.candidates(&inst.lemma, inst.pos);
    let scored: Vec<(usize, f64)> = candidates
        .iter()
        .enumerate()
        .filter_map(|(i, k)| {
            store
                .vector(k.as_str())
                .map(|v| (i, evaluate::similarity(Similarity::Cosine, &inst.context, v)))
        })
        .collect();
    let best = scored.iter().map(|(_, s)| *s).fold(f64::NEG_INFINITY, f64::max);
    match scored.iter().find(|(_, s)| *s == best) {
        Some((i, _)) => candidates[*i].clone(),
        None => candidates[0].clone(),
    }
}

/// Four instances with gold at rank 1, 2, 4 and absent in a top-5 list.
pub fn mrr_fixture() -> (HashMap<String, SenseKey>, HashMap<String, Vec<String>>, GoldKey) {
    let gold: GoldKey = (1..=4)
        .map(|i| (format!("i{i}"), vec![key(&format!("g{i}%1:06:00::"))]))
        .collect();
    let filler = |n: usize| (0..n).map(|j| format!("o{j}%1:06:00::")).collect::<Vec<_>>();
    let gold_at = |i: usize, rank: usize| {
        let mut r = filler(5);
        r[rank - 1] = format!("g{i}%1:06:00::");
        r
    };
    let rankings: HashMap<String, Vec<String>> = [
        ("i1".to_string(), gold_at(1, 1)),
        ("i2".to_string(), gold_at(2, 2)),
        ("i3".to_string(), gold_at(3, 4)),
        ("i4".to_string(), filler(5)),
    ]
    .into_iter()
    .collect();
    let preds = rankings.iter().map(|(id, r)| (id.clone(), key(&r[0]))).collect();
    (preds, rankings, gold)
}
