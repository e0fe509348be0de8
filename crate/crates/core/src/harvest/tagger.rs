//! A dictionary-based fallback tagger for tests and small demos.
//!
//! Lemmas come from WordNet's `*.exc` exception lists and the classic
//! detachment suffix rules; the POS is the first of noun, verb, adjective,
//! adverb under which the lemma exists in the inventory. Real pipelines should
//! supply pre-tagged input instead.

use std::collections::HashMap;
use std::path::Path;

use super::{AnnotatedSentence, TokenRecord};
use crate::error::{Error, Result};
use crate::inventory::SenseInventory;
use crate::pos::Pos;

const NOUN_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];
const VERB_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];
const ADJ_RULES: &[(&str, &str)] = &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")];

fn rules(pos: Pos) -> &'static [(&'static str, &'static str)] {
    match pos {
        Pos::Noun => NOUN_RULES,
        Pos::Verb => VERB_RULES,
        Pos::Adj => ADJ_RULES,
        Pos::Adv => &[],
    }
}

#[derive(Debug, Default, Clone)]
pub struct NaiveTagger {
    exceptions: HashMap<(String, Pos), Vec<String>>,
}

impl NaiveTagger {
    /// A tagger without exception lists (suffix rules only).
    pub fn new() -> NaiveTagger {
        NaiveTagger::default()
    }

    /// Loads `noun.exc`, `verb.exc`, `adj.exc` and `adv.exc` from `dir`;
    /// missing files are treated as empty.
    pub fn from_dir(dir: &Path) -> Result<NaiveTagger> {
        let mut tagger = NaiveTagger::new();
        for pos in Pos::ALL {
            let path = dir.join(format!("{}.exc", pos.file_suffix()));
            let text = match std::fs::read_to_string(&path) {
                Ok(t) => t,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => continue,
                Err(e) => return Err(Error::io(&path, e)),
            };
            for line in text.lines() {
                let mut words = line.split_whitespace();
                let Some(inflected) = words.next() else {
                    continue;
                };
                tagger
                    .exceptions
                    .entry((inflected.to_string(), pos))
                    .or_default()
                    .extend(words.map(str::to_string));
            }
        }
        Ok(tagger)
    }

    /// Base form and POS of a lowercase word, or `None` if the inventory
    /// knows no reading of it.
    pub fn lemmatize(&self, inv: &SenseInventory, word: &str) -> Option<(String, Pos)> {
        if let Some(pos) = Pos::ALL.into_iter().find(|&p| inv.contains_lemma(word, p)) {
            return Some((word.to_string(), pos));
        }
        for pos in Pos::ALL {
            if let Some(bases) = self.exceptions.get(&(word.to_string(), pos)) {
                if let Some(base) = bases.iter().find(|b| inv.contains_lemma(b, pos)) {
                    return Some((base.clone(), pos));
                }
            }
        }
        for pos in Pos::ALL {
            for (suffix, ending) in rules(pos) {
                if let Some(stem) = word.strip_suffix(suffix) {
                    if stem.is_empty() {
                        continue;
                    }
                    let base = format!("{stem}{ending}");
                    if inv.contains_lemma(&base, pos) {
                        return Some((base, pos));
                    }
                }
            }
        }
        None
    }

    /// Tokenizes on letters/digits (keeping inner hyphens and apostrophes)
    /// and tags each token. No token is flagged as an entity.
    pub fn tag(&self, inv: &SenseInventory, doc: &str, sent: &str, text: &str) -> AnnotatedSentence {
        let mut tokens = Vec::new();
        let mut chars = text.char_indices().peekable();
        while let Some((start, c)) = chars.next() {
            if c.is_whitespace() {
                continue;
            }
            let mut end = start + c.len_utf8();
            if c.is_alphanumeric() {
                while let Some(&(i, d)) = chars.peek() {
                    let inner = (d == '-' || d == '\'') && text[i + d.len_utf8()..].starts_with(char::is_alphanumeric);
                    if d.is_alphanumeric() || inner {
                        end = i + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
            }
            let surface = &text[start..end];
            let lower = surface.to_lowercase();
            let (lemma, pos) = match c.is_alphanumeric().then(|| self.lemmatize(inv, &lower)).flatten() {
                Some((lemma, pos)) => (lemma, Some(pos)),
                None => (lower, None),
            };
            tokens.push(TokenRecord {
                surface: surface.to_string(),
                lemma,
                pos,
                char_span: [start, end],
                is_entity: false,
            });
        }
        AnnotatedSentence {
            doc_id: doc.to_string(),
            sent_id: sent.to_string(),
            text: text.to_string(),
            tokens,
            annotations: Vec::new(),
        }
    }
}
