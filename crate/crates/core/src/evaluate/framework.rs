//! Reader for the unified WSD evaluation framework: a corpus XML file plus a
//! gold key file of `instance_id key1 [key2 ...]` lines.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::error::{Error, Result};
use crate::harvest::{AnnotatedSentence, Annotation, TokenRecord};
use crate::inventory::SenseKey;
use crate::pos::Pos;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameworkToken {
    pub surface: String,
    pub lemma: String,
    /// Universal POS tags outside the four open classes map to `None`.
    pub pos: Option<Pos>,
    pub instance_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameworkSentence {
    pub text_id: String,
    pub sentence_id: String,
    pub tokens: Vec<FrameworkToken>,
}

/// A target word to disambiguate; `sentence`/`token` index into
/// [`Framework::sentences`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceMeta {
    pub id: String,
    pub lemma: String,
    pub pos: Pos,
    pub sentence: usize,
    pub token: usize,
}

impl InstanceMeta {
    /// Dataset name: the id prefix before the first `.`.
    pub fn dataset(&self) -> &str {
        dataset_of(&self.id)
    }
}

pub fn dataset_of(id: &str) -> &str {
    id.split('.').next().unwrap_or(id)
}

/// Gold senses per instance id.
pub type GoldKey = BTreeMap<String, Vec<SenseKey>>;

#[derive(Debug, Clone, Default)]
pub struct Framework {
    pub sentences: Vec<FrameworkSentence>,
    /// Instances that have gold keys, in document order.
    pub instances: Vec<InstanceMeta>,
    pub gold: GoldKey,
    pub warnings: Vec<String>,
}

fn attrs(file: &Path, e: &BytesStart<'_>) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for a in e.attributes() {
        let a = a.map_err(|err| xml_err(file, err))?;
        let key = String::from_utf8_lossy(a.key.as_ref()).into_owned();
        let value = a.unescape_value().map_err(|err| xml_err(file, err))?.into_owned();
        out.insert(key, value);
    }
    Ok(out)
}

fn xml_err(file: &Path, err: impl std::fmt::Display) -> Error {
    Error::Xml {
        file: file.to_path_buf(),
        message: err.to_string(),
    }
}

/// Parses the corpus XML. Instances carry no gold yet.
pub fn parse_corpus_xml(path: &Path) -> Result<(Vec<FrameworkSentence>, Vec<InstanceMeta>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = Reader::from_reader(BufReader::new(file));
    reader.config_mut().trim_text(true);

    let mut sentences = Vec::new();
    let mut instances = Vec::new();
    let mut text_id = String::new();
    let mut current: Option<FrameworkSentence> = None;
    // Open <wf>/<instance>: (attributes, is_instance, collected text).
    let mut open_token: Option<(BTreeMap<String, String>, bool, String)> = None;
    let mut depth = 0usize;
    let mut seen_root = false;
    let mut buf = Vec::new();

    loop {
        let event = reader.read_event_into(&mut buf).map_err(|e| xml_err(path, e))?;
        match event {
            Event::Start(e) => {
                depth += 1;
                let name = e.name();
                match name.as_ref() {
                    b"corpus" => seen_root = true,
                    b"text" => text_id = attrs(path, &e)?.remove("id").unwrap_or_default(),
                    b"sentence" => {
                        let id = attrs(path, &e)?.remove("id").unwrap_or_default();
                        current = Some(FrameworkSentence {
                            text_id: text_id.clone(),
                            sentence_id: id,
                            tokens: Vec::new(),
                        });
                    }
                    b"wf" | b"instance" => {
                        if current.is_none() {
                            return Err(xml_err(path, "token outside <sentence>"));
                        }
                        open_token = Some((attrs(path, &e)?, name.as_ref() == b"instance", String::new()));
                    }
                    _ => {}
                }
            }
            Event::Text(t) => {
                if let Some((_, _, text)) = open_token.as_mut() {
                    text.push_str(&t.unescape().map_err(|e| xml_err(path, e))?);
                }
            }
            Event::End(e) => {
                depth = depth.saturating_sub(1);
                match e.name().as_ref() {
                    b"wf" | b"instance" => {
                        let (mut a, is_instance, surface) = open_token
                            .take()
                            .ok_or_else(|| xml_err(path, "unbalanced token element"))?;
                        let sentence = current.as_mut().expect("checked at start tag");
                        let lemma = a.remove("lemma").unwrap_or_else(|| surface.to_lowercase());
                        let pos = a.get("pos").and_then(|p| Pos::from_universal(p));
                        let mut instance_id = None;
                        if is_instance {
                            let id = a.remove("id").ok_or_else(|| xml_err(path, "<instance> without id"))?;
                            let pos = pos.ok_or_else(|| {
                                xml_err(path, format!("instance {id} has non-content pos {:?}", a.get("pos")))
                            })?;
                            instances.push(InstanceMeta {
                                id: id.clone(),
                                lemma: lemma.to_lowercase(),
                                pos,
                                sentence: sentences.len(),
                                token: sentence.tokens.len(),
                            });
                            instance_id = Some(id);
                        }
                        sentence.tokens.push(FrameworkToken {
                            surface,
                            lemma,
                            pos,
                            instance_id,
                        });
                    }
                    b"sentence" => {
                        if let Some(s) = current.take() {
                            sentences.push(s);
                        }
                    }
                    _ => {}
                }
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }
    if !seen_root || depth != 0 {
        return Err(xml_err(path, "missing <corpus> root or unclosed elements"));
    }
    Ok((sentences, instances))
}

/// Parses `instance_id key1 [key2 ...]` lines.
pub fn parse_gold(path: &Path) -> Result<GoldKey> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut gold = GoldKey::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let mut fields = line.split_whitespace();
        let Some(id) = fields.next() else {
            continue;
        };
        let keys = fields
            .map(|k| SenseKey::parse(k).map_err(|e| Error::parse(path, i + 1, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        if keys.is_empty() {
            return Err(Error::parse(path, i + 1, format!("instance {id} has no gold key")));
        }
        if gold.insert(id.to_string(), keys).is_some() {
            return Err(Error::parse(path, i + 1, format!("duplicate instance {id}")));
        }
    }
    Ok(gold)
}

/// Parses corpus and gold together. Instances without gold are warned
/// about and dropped.
pub fn parse_framework(xml_path: &Path, gold_path: &Path) -> Result<Framework> {
    let (sentences, all_instances) = parse_corpus_xml(xml_path)?;
    let mut gold = parse_gold(gold_path)?;
    let mut warnings = Vec::new();
    let mut instances = Vec::with_capacity(all_instances.len());
    for inst in all_instances {
        if gold.contains_key(&inst.id) {
            instances.push(inst);
        } else {
            warnings.push(format!("instance {} has no gold key; excluded", inst.id));
        }
    }
    let known: std::collections::HashSet<&str> = instances.iter().map(|i| i.id.as_str()).collect();
    let orphans: Vec<String> = gold.keys().filter(|id| !known.contains(id.as_str())).cloned().collect();
    for id in orphans {
        warnings.push(format!("gold key {id} has no instance; ignored"));
        gold.remove(&id);
    }
    Ok(Framework {
        sentences,
        instances,
        gold,
        warnings,
    })
}

impl Framework {
    /// Converts the gold-annotated corpus into annotated sentences, one
    /// annotation per instance carrying its first gold key. Tokens are joined
    /// by single spaces to form the text.
    pub fn to_annotated(&self) -> Vec<AnnotatedSentence> {
        let mut out = Vec::with_capacity(self.sentences.len());
        for s in &self.sentences {
            let mut text = String::new();
            let mut tokens = Vec::with_capacity(s.tokens.len());
            let mut annotations = Vec::new();
            for (i, t) in s.tokens.iter().enumerate() {
                if !text.is_empty() {
                    text.push(' ');
                }
                let start = text.len();
                text.push_str(if t.surface.is_empty() { "_" } else { &t.surface });
                let lemma: String = t.lemma.to_lowercase().split_whitespace().collect::<Vec<_>>().join("_");
                tokens.push(TokenRecord {
                    surface: t.surface.clone(),
                    lemma: if lemma.is_empty() { "_".to_string() } else { lemma },
                    pos: t.pos,
                    char_span: [start, text.len()],
                    is_entity: false,
                });
                if let Some(keys) = t.instance_id.as_ref().and_then(|id| self.gold.get(id)) {
                    annotations.push(Annotation {
                        first: i,
                        last: i,
                        sense: keys[0].clone(),
                    });
                }
            }
            out.push(AnnotatedSentence {
                doc_id: s.text_id.clone(),
                sent_id: s.sentence_id.clone(),
                text,
                tokens,
                annotations,
            });
        }
        out
    }
}
