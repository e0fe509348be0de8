use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// WordNet part of speech. Adjective satellites are folded into `Adj`.
///
/// Variants are ordered by their one-letter tag so that ids sort the same
/// way as their textual form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pos {
    #[serde(rename = "a")]
    Adj,
    #[serde(rename = "n")]
    Noun,
    #[serde(rename = "r")]
    Adv,
    #[serde(rename = "v")]
    Verb,
}

impl Pos {
    pub const ALL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adj, Pos::Adv];

    pub fn tag(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adj => 'a',
            Pos::Adv => 'r',
        }
    }

    pub fn tag_str(self) -> &'static str {
        match self {
            Pos::Noun => "n",
            Pos::Verb => "v",
            Pos::Adj => "a",
            Pos::Adv => "r",
        }
    }

    /// Parses a WordNet synset-type letter (`n v a s r`).
    pub fn from_wn_char(c: char) -> Option<Pos> {
        match c {
            'n' => Some(Pos::Noun),
            'v' => Some(Pos::Verb),
            'a' | 's' => Some(Pos::Adj),
            'r' => Some(Pos::Adv),
            _ => None,
        }
    }

    /// Sense-key `ss_type` digit (1..=5).
    pub fn from_ss_type(ss_type: u8) -> Option<Pos> {
        match ss_type {
            1 => Some(Pos::Noun),
            2 => Some(Pos::Verb),
            3 | 5 => Some(Pos::Adj),
            4 => Some(Pos::Adv),
            _ => None,
        }
    }

    /// Stem of the WNDB file names (`data.noun`, `index.adj`, ...).
    pub fn file_suffix(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adj => "adj",
            Pos::Adv => "adv",
        }
    }

    /// Universal POS tags used by the evaluation framework XML.
    pub fn from_universal(tag: &str) -> Option<Pos> {
        match tag {
            "NOUN" => Some(Pos::Noun),
            "VERB" => Some(Pos::Verb),
            "ADJ" => Some(Pos::Adj),
            "ADV" => Some(Pos::Adv),
            _ => None,
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Pos::from_wn_char(c).ok_or_else(|| format!("unknown pos `{s}`")),
            _ => Pos::from_universal(s).ok_or_else(|| format!("unknown pos `{s}`")),
        }
    }
}
