use std::fmt;

use crate::error::{Error, Result};

pub const LEXNAME_COUNT: usize = 45;

/// WordNet lexicographer file names, indexed by `lex_filenum`.
pub const LEXNAMES: [&str; LEXNAME_COUNT] = [
    "adj.all",
    "adj.pert",
    "adv.all",
    "noun.Tops",
    "noun.act",
    "noun.animal",
    "noun.artifact",
    "noun.attribute",
    "noun.body",
    "noun.cognition",
    "noun.communication",
    "noun.event",
    "noun.feeling",
    "noun.food",
    "noun.group",
    "noun.location",
    "noun.motive",
    "noun.object",
    "noun.person",
    "noun.phenomenon",
    "noun.plant",
    "noun.possession",
    "noun.process",
    "noun.quantity",
    "noun.relation",
    "noun.shape",
    "noun.state",
    "noun.substance",
    "noun.time",
    "verb.body",
    "verb.change",
    "verb.cognition",
    "verb.communication",
    "verb.competition",
    "verb.consumption",
    "verb.contact",
    "verb.creation",
    "verb.emotion",
    "verb.motion",
    "verb.perception",
    "verb.possession",
    "verb.social",
    "verb.stative",
    "verb.weather",
    "adj.ppl",
];

/// Lexicographer file id (supersense), `0..45`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lexname(u8);

impl Lexname {
    pub fn new(id: u8) -> Result<Lexname> {
        if (id as usize) < LEXNAME_COUNT {
            Ok(Lexname(id))
        } else {
            Err(Error::Integrity(format!("unknown lexname id {id}")))
        }
    }

    pub fn id(self) -> u8 {
        self.0
    }

    pub fn name(self) -> &'static str {
        LEXNAMES[self.0 as usize]
    }
}

impl fmt::Display for Lexname {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
