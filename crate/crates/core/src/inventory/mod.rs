//! The sense inventory: synsets, sense keys, hypernym edges and lexnames.
//!
//! An inventory is built once (from the Princeton WNDB files or from the
//! normalized TSV format) and is immutable afterwards. Construction checks
//! every structural invariant, so the rest of the crate can index into it
//! without re-validating.

mod lexnames;
mod tsv;
mod wndb;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pos::Pos;

pub use lexnames::{Lexname, LEXNAMES, LEXNAME_COUNT};
pub use tsv::load_tsv_inventory;
pub use wndb::{parse_wndb, parse_wndb_with, WndbOptions};

/// WordNet sense key, `lemma%ss_type:lex_filenum:lex_id:head:head_id`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SenseKey(String);

impl SenseKey {
    pub fn parse(text: &str) -> Result<SenseKey> {
        let invalid = |reason| Error::InvalidSenseKey {
            key: text.to_string(),
            reason,
        };
        let (lemma, rest) = text.split_once('%').ok_or_else(|| invalid("missing `%`"))?;
        if rest.contains('%') {
            return Err(invalid("more than one `%`"));
        }
        if lemma.is_empty() {
            return Err(invalid("empty lemma"));
        }
        if lemma.chars().any(|c| c.is_whitespace() || c.is_uppercase()) {
            return Err(invalid("lemma must be lowercase with `_` for spaces"));
        }
        let fields: Vec<&str> = rest.split(':').collect();
        if fields.len() != 5 {
            return Err(invalid("expected exactly four `:` separators"));
        }
        let ss_type: u8 = fields[0].parse().map_err(|_| invalid("bad ss_type"))?;
        if Pos::from_ss_type(ss_type).is_none() {
            return Err(invalid("ss_type out of range"));
        }
        if fields[1].parse::<u8>().is_err() || fields[2].parse::<u8>().is_err() {
            return Err(invalid("bad lex_filenum or lex_id"));
        }
        Ok(SenseKey(text.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn lemma(&self) -> &str {
        self.0.split_once('%').map(|(l, _)| l).unwrap_or(&self.0)
    }

    pub fn ss_type(&self) -> u8 {
        let rest = &self.0[self.0.find('%').unwrap_or(0) + 1..];
        rest.as_bytes().first().map(|b| b - b'0').unwrap_or(0)
    }

    /// Part of speech with satellites folded into adjectives.
    pub fn pos(&self) -> Pos {
        Pos::from_ss_type(self.ss_type()).expect("validated on construction")
    }

    pub fn lex_filenum(&self) -> u8 {
        self.0
            .split(':')
            .nth(1)
            .and_then(|s| s.parse().ok())
            .expect("validated on construction")
    }
}

impl fmt::Display for SenseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for SenseKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SenseKey::parse(s)
    }
}

impl TryFrom<String> for SenseKey {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        SenseKey::parse(&s)
    }
}

impl From<SenseKey> for String {
    fn from(k: SenseKey) -> String {
        k.0
    }
}

impl AsRef<str> for SenseKey {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for SenseKey {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// `pos:offset`, printed with an eight-digit zero-padded offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SynsetId {
    pub pos: Pos,
    pub offset: u32,
}

impl SynsetId {
    pub fn new(pos: Pos, offset: u32) -> SynsetId {
        SynsetId { pos, offset }
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:08}", self.pos, self.offset)
    }
}

impl FromStr for SynsetId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (pos, offset) = s.split_once(':').ok_or_else(|| format!("synset id `{s}` lacks `:`"))?;
        let pos: Pos = pos.parse()?;
        let offset = offset
            .parse()
            .map_err(|_| format!("synset id `{s}` has a bad offset"))?;
        Ok(SynsetId { pos, offset })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub id: SynsetId,
    pub members: Vec<SenseKey>,
    pub hypernyms: Vec<SynsetId>,
    pub lexname: Lexname,
}

/// Immutable sense inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenseInventory {
    synsets: BTreeMap<SynsetId, Synset>,
    sense_index: HashMap<SenseKey, SynsetId>,
    // One map per Pos, indexed by `pos_slot`.
    lemma_index: [HashMap<String, Vec<SenseKey>>; 4],
}

fn pos_slot(pos: Pos) -> usize {
    match pos {
        Pos::Noun => 0,
        Pos::Verb => 1,
        Pos::Adj => 2,
        Pos::Adv => 3,
    }
}

impl SenseInventory {
    /// Builds an inventory from synsets and, optionally, explicit candidate
    /// lists in sense-number order. Without explicit lists, the candidates of a
    /// lemma follow synset-id order, then member order.
    pub fn from_synsets(
        synsets: impl IntoIterator<Item = Synset>,
        lemma_lists: Option<HashMap<(String, Pos), Vec<SenseKey>>>,
    ) -> Result<SenseInventory> {
        let mut by_id = BTreeMap::new();
        for s in synsets {
            let id = s.id;
            if by_id.insert(id, s).is_some() {
                return Err(Error::Integrity(format!("duplicate synset id {id}")));
            }
        }

        let mut sense_index = HashMap::new();
        for s in by_id.values() {
            if s.members.is_empty() {
                return Err(Error::Integrity(format!("synset {} has no members", s.id)));
            }
            if s.hypernyms.contains(&s.id) {
                return Err(Error::Integrity(format!("synset {} is its own hypernym", s.id)));
            }
            for h in &s.hypernyms {
                if !by_id.contains_key(h) {
                    return Err(Error::Integrity(format!(
                        "synset {} points to missing hypernym {h}",
                        s.id
                    )));
                }
            }
            for key in &s.members {
                if key.pos() != s.id.pos {
                    return Err(Error::Integrity(format!(
                        "sense {key} has pos {} but belongs to synset {}",
                        key.pos(),
                        s.id
                    )));
                }
                if sense_index.insert(key.clone(), s.id).is_some() {
                    return Err(Error::Integrity(format!(
                        "sense {key} is listed in more than one synset"
                    )));
                }
            }
        }

        let lists = match lemma_lists {
            Some(lists) => lists,
            None => {
                let mut lists: HashMap<(String, Pos), Vec<SenseKey>> = HashMap::new();
                for s in by_id.values() {
                    for key in &s.members {
                        lists
                            .entry((key.lemma().to_string(), key.pos()))
                            .or_default()
                            .push(key.clone());
                    }
                }
                lists
            }
        };

        let mut lemma_index: [HashMap<String, Vec<SenseKey>>; 4] = Default::default();
        let mut listed = HashSet::with_capacity(sense_index.len());
        for ((lemma, pos), keys) in lists {
            if keys.is_empty() {
                return Err(Error::Integrity(format!("empty candidate list for {lemma}/{pos}")));
            }
            for key in &keys {
                if !sense_index.contains_key(key) {
                    return Err(Error::Integrity(format!(
                        "candidate {key} of {lemma}/{pos} is not in any synset"
                    )));
                }
                if key.lemma() != lemma || key.pos() != pos {
                    return Err(Error::Integrity(format!("candidate {key} listed under {lemma}/{pos}")));
                }
                if !listed.insert(key.clone()) {
                    return Err(Error::Integrity(format!("sense {key} listed twice")));
                }
            }
            lemma_index[pos_slot(pos)].insert(lemma, keys);
        }
        if listed.len() != sense_index.len() {
            return Err(Error::Integrity(format!(
                "{} senses missing from the lemma index",
                sense_index.len() - listed.len()
            )));
        }

        Ok(SenseInventory {
            synsets: by_id,
            sense_index,
            lemma_index,
        })
    }

    pub fn is_monosemous(&self, lemma: &str, pos: Pos) -> bool {
        self.candidates(lemma, pos).len() == 1
    }

    /// Candidate senses in sense-number order; empty for unknown pairs.
    pub fn candidates(&self, lemma: &str, pos: Pos) -> &[SenseKey] {
        self.lemma_index[pos_slot(pos)]
            .get(lemma)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn contains_lemma(&self, lemma: &str, pos: Pos) -> bool {
        self.lemma_index[pos_slot(pos)].contains_key(lemma)
    }

    /// 1-based WordNet sense number of `key` among its lemma's candidates.
    pub fn sense_number(&self, key: &SenseKey) -> Option<usize> {
        self.candidates(key.lemma(), key.pos())
            .iter()
            .position(|k| k == key)
            .map(|i| i + 1)
    }

    /// True when the sense's (lemma, pos) has two or more candidates.
    pub fn is_ambiguous_sense(&self, key: &SenseKey) -> bool {
        self.candidates(key.lemma(), key.pos()).len() >= 2
    }

    pub fn synset(&self, id: SynsetId) -> Option<&Synset> {
        self.synsets.get(&id)
    }

    pub fn synset_of(&self, key: &SenseKey) -> Option<&Synset> {
        self.sense_index.get(key).and_then(|id| self.synsets.get(id))
    }

    pub fn synset_id_of(&self, key: &str) -> Option<SynsetId> {
        self.sense_index.get(key).copied()
    }

    /// The inventory's own copy of a sense key given as text.
    pub fn sense_key(&self, key: &str) -> Option<&SenseKey> {
        self.sense_index.get_key_value(key).map(|(k, _)| k)
    }

    pub fn contains_sense(&self, key: &str) -> bool {
        self.sense_index.contains_key(key)
    }

    /// Synsets in id order.
    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    /// All sense keys, synset by synset in id order.
    pub fn senses(&self) -> impl Iterator<Item = &SenseKey> {
        self.synsets.values().flat_map(|s| s.members.iter())
    }

    pub fn num_synsets(&self) -> usize {
        self.synsets.len()
    }

    pub fn num_senses(&self) -> usize {
        self.sense_index.len()
    }

    /// Every (lemma, pos) pair with its candidates, in unspecified order.
    pub fn lemma_entries(&self) -> impl Iterator<Item = (&str, Pos, &[SenseKey])> {
        Pos::ALL.into_iter().flat_map(move |pos| {
            self.lemma_index[pos_slot(pos)]
                .iter()
                .map(move |(l, keys)| (l.as_str(), pos, keys.as_slice()))
        })
    }

    pub fn num_lemmas(&self) -> usize {
        self.lemma_index.iter().map(HashMap::len).sum()
    }

    /// Longest lemma in tokens (`_`-separated parts).
    pub fn max_lemma_tokens(&self) -> usize {
        self.lemma_index
            .iter()
            .flat_map(|m| m.keys())
            .map(|l| l.split('_').count())
            .max()
            .unwrap_or(0)
    }

    /// Counts of (lemma, pos) pairs with two or more senses and with exactly one.
    pub fn ambiguity_counts(&self) -> (usize, usize) {
        let mut ambiguous = 0;
        let mut monosemous = 0;
        for (_, _, keys) in self.lemma_entries() {
            if keys.len() == 1 {
                monosemous += 1;
            } else {
                ambiguous += 1;
            }
        }
        (ambiguous, monosemous)
    }

    pub fn to_tsv_string(&self) -> String {
        let mut out = Vec::new();
        self.write_tsv(&mut out).expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("inventory text is UTF-8")
    }

    pub fn write_tsv<W: std::io::Write>(&self, w: W) -> std::io::Result<()> {
        tsv::write_tsv(self, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(s: &str) -> SenseKey {
        SenseKey::parse(s).unwrap()
    }

    #[test]
    fn sense_key_syntax() {
        let k = key("keypad%1:06:00::");
        assert_eq!(k.lemma(), "keypad");
        assert_eq!(k.pos(), Pos::Noun);
        assert_eq!(k.lex_filenum(), 6);
        let sat = key("emergent%5:00:00:emerging:00");
        assert_eq!(sat.pos(), Pos::Adj);
        assert_eq!(sat.ss_type(), 5);

        assert!(SenseKey::parse("keypad1:06:00::").is_err());
        assert!(SenseKey::parse("key%pad%1:06:00::").is_err());
        assert!(SenseKey::parse("keypad%1:06:00:").is_err());
        assert!(SenseKey::parse("Keypad%1:06:00::").is_err());
        assert!(SenseKey::parse("key pad%1:06:00::").is_err());
        assert!(SenseKey::parse("keypad%9:06:00::").is_err());
    }

    #[test]
    fn synset_id_text() {
        let id: SynsetId = "n:00001740".parse().unwrap();
        assert_eq!(id, SynsetId::new(Pos::Noun, 1740));
        assert_eq!(id.to_string(), "n:00001740");
        assert!("x:1".parse::<SynsetId>().is_err());
        assert!("n1".parse::<SynsetId>().is_err());
    }

    fn synset(pos: Pos, off: u32, members: &[&str], hyp: &[u32], lex: u8) -> Synset {
        Synset {
            id: SynsetId::new(pos, off),
            members: members.iter().map(|m| key(m)).collect(),
            hypernyms: hyp.iter().map(|&h| SynsetId::new(pos, h)).collect(),
            lexname: Lexname::new(lex).unwrap(),
        }
    }

    #[test]
    fn builds_and_queries() {
        let inv = SenseInventory::from_synsets(
            vec![
                synset(Pos::Noun, 1, &["bank%1:14:00::"], &[], 14),
                synset(Pos::Noun, 2, &["bank%1:17:01::", "side%1:17:00::"], &[1], 17),
                synset(Pos::Noun, 3, &["keypad%1:06:00::"], &[], 6),
            ],
            None,
        )
        .unwrap();
        assert!(inv.is_monosemous("keypad", Pos::Noun));
        assert!(!inv.is_monosemous("bank", Pos::Noun));
        assert!(!inv.is_monosemous("zzzz", Pos::Noun));
        assert!(!inv.is_monosemous("keypad", Pos::Verb));
        assert_eq!(inv.candidates("bank", Pos::Noun).len(), 2);
        assert!(inv.candidates("zzzz", Pos::Noun).is_empty());
        assert_eq!(inv.sense_number(&key("bank%1:17:01::")), Some(2));
        assert_eq!(inv.ambiguity_counts(), (1, 2));
        assert_eq!(inv.num_senses(), 4);
    }

    #[test]
    fn rejects_broken_graphs() {
        let own = SenseInventory::from_synsets(vec![synset(Pos::Noun, 1, &["a%1:03:00::"], &[1], 3)], None);
        assert!(matches!(own, Err(Error::Integrity(_))));
        let dangling = SenseInventory::from_synsets(vec![synset(Pos::Noun, 1, &["a%1:03:00::"], &[9], 3)], None);
        assert!(matches!(dangling, Err(Error::Integrity(_))));
        let twice = SenseInventory::from_synsets(
            vec![
                synset(Pos::Noun, 1, &["a%1:03:00::"], &[], 3),
                synset(Pos::Noun, 2, &["a%1:03:00::"], &[], 3),
            ],
            None,
        );
        assert!(matches!(twice, Err(Error::Integrity(_))));
        let empty = SenseInventory::from_synsets(vec![synset(Pos::Noun, 1, &[], &[], 3)], None);
        assert!(empty.is_err());
    }
}
