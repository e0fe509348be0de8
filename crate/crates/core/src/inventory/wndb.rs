//! Reader for the Princeton WordNet database files (`data.*`, `index.*`,
//! `index.sense`).

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::{Lexname, SenseInventory, SenseKey, Synset, SynsetId};
use crate::error::{Error, Result};
use crate::pos::Pos;

#[derive(Debug, Clone, Copy)]
pub struct WndbOptions {
    /// Treat instance-hypernym pointers (`@i`) as hypernym edges.
    pub include_instance_hypernyms: bool,
}

impl Default for WndbOptions {
    fn default() -> Self {
        WndbOptions {
            include_instance_hypernyms: true,
        }
    }
}

pub fn parse_wndb(dir: impl AsRef<Path>) -> Result<SenseInventory> {
    parse_wndb_with(dir, WndbOptions::default())
}

struct RawSynset {
    lexname: Lexname,
    /// Lowercased words, syntactic markers stripped, in data-line order.
    words: Vec<String>,
    hypernyms: Vec<SynsetId>,
    line: usize,
}

pub fn parse_wndb_with(dir: impl AsRef<Path>, opts: WndbOptions) -> Result<SenseInventory> {
    let dir = dir.as_ref();
    let mut raw: HashMap<SynsetId, RawSynset> = HashMap::new();
    for pos in Pos::ALL {
        let path = dir.join(format!("data.{}", pos.file_suffix()));
        let text = read_text(&path)?;
        parse_data_file(&path, &text, pos, opts, &mut raw)?;
    }

    // Hypernym targets must resolve before anything else refers to them.
    for (id, s) in &raw {
        for h in &s.hypernyms {
            if !raw.contains_key(h) {
                let file = dir.join(format!("data.{}", id.pos.file_suffix()));
                return Err(Error::Integrity(format!(
                    "{}:{}: dangling pointer from {id} to {h}",
                    file.display(),
                    s.line
                )));
            }
        }
    }

    let sense_path = dir.join("index.sense");
    let sense_text = read_text(&sense_path)?;
    let mut keys_of: HashMap<SynsetId, Vec<SenseKey>> = HashMap::new();
    for (i, line) in sense_text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(' ');
        let (Some(key), Some(offset)) = (fields.next(), fields.next()) else {
            return Err(Error::parse(&sense_path, lineno, "expected `sense_key offset ...`"));
        };
        let key = SenseKey::parse(key).map_err(|e| Error::parse(&sense_path, lineno, e.to_string()))?;
        let offset: u32 = offset
            .parse()
            .map_err(|_| Error::parse(&sense_path, lineno, format!("bad offset `{offset}`")))?;
        let id = SynsetId::new(key.pos(), offset);
        if !raw.contains_key(&id) {
            return Err(Error::Integrity(format!(
                "{}:{lineno}: sense {key} points to missing synset {id}",
                sense_path.display()
            )));
        }
        keys_of.entry(id).or_default().push(key);
    }

    let mut synsets = Vec::with_capacity(raw.len());
    for (id, r) in raw {
        let mut keys = keys_of.remove(&id).unwrap_or_default();
        if keys.is_empty() {
            return Err(Error::Integrity(format!(
                "synset {id} has no sense keys in index.sense"
            )));
        }
        let rank = |k: &SenseKey| r.words.iter().position(|w| w == k.lemma());
        if let Some(orphan) = keys.iter().find(|k| rank(k).is_none()) {
            return Err(Error::Integrity(format!(
                "sense {orphan} does not name a word of synset {id}"
            )));
        }
        keys.sort_by_key(|k| (rank(k), k.clone()));
        synsets.push(Synset {
            id,
            members: keys,
            hypernyms: r.hypernyms,
            lexname: r.lexname,
        });
    }

    let key_lookup: HashMap<(SynsetId, &str), &SenseKey> = synsets
        .iter()
        .flat_map(|s| s.members.iter().map(move |k| ((s.id, k.lemma()), k)))
        .collect();

    let mut lemma_lists: HashMap<(String, Pos), Vec<SenseKey>> = HashMap::new();
    for pos in Pos::ALL {
        let path = dir.join(format!("index.{}", pos.file_suffix()));
        let text = read_text(&path)?;
        for (i, line) in text.lines().enumerate() {
            if line.starts_with("  ") || line.trim().is_empty() {
                continue;
            }
            let lineno = i + 1;
            let (lemma, offsets) = parse_index_line(line).map_err(|m| Error::parse(&path, lineno, m))?;
            let mut keys = Vec::with_capacity(offsets.len());
            for offset in offsets {
                let id = SynsetId::new(pos, offset);
                let key = key_lookup.get(&(id, lemma)).ok_or_else(|| {
                    Error::Integrity(format!(
                        "{}:{lineno}: no sense key for {lemma} in synset {id}",
                        path.display()
                    ))
                })?;
                keys.push((*key).clone());
            }
            lemma_lists.insert((lemma.to_string(), pos), keys);
        }
    }

    SenseInventory::from_synsets(synsets, Some(lemma_lists))
}

fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse {
        file: PathBuf::from(path),
        line: 0,
        message: format!("not UTF-8: {e}"),
    })
}

fn parse_data_file(
    path: &Path,
    text: &str,
    pos: Pos,
    opts: WndbOptions,
    out: &mut HashMap<SynsetId, RawSynset>,
) -> Result<()> {
    for (i, line) in text.lines().enumerate() {
        if line.starts_with("  ") || line.trim().is_empty() {
            continue;
        }
        let lineno = i + 1;
        let (offset, raw) = parse_data_line(line, pos, opts, lineno).map_err(|m| Error::parse(path, lineno, m))?;
        let id = SynsetId::new(pos, offset);
        if out.insert(id, raw).is_some() {
            return Err(Error::parse(path, lineno, format!("duplicate synset offset {offset}")));
        }
    }
    Ok(())
}

fn parse_data_line(
    line: &str,
    pos: Pos,
    opts: WndbOptions,
    lineno: usize,
) -> std::result::Result<(u32, RawSynset), String> {
    let body = line.split(" | ").next().unwrap_or(line);
    let mut f = body.split_ascii_whitespace();
    let mut next = |what: &str| f.next().ok_or_else(|| format!("truncated line: missing {what}"));

    let offset: u32 = next("offset")?.parse().map_err(|_| "bad synset offset".to_string())?;
    let lex_filenum: u8 = next("lex_filenum")?
        .parse()
        .map_err(|_| "bad lex_filenum".to_string())?;
    let lexname = Lexname::new(lex_filenum).map_err(|e| e.to_string())?;
    let ss_type = next("ss_type")?;
    let ss_pos = ss_type
        .chars()
        .next()
        .and_then(Pos::from_wn_char)
        .ok_or_else(|| format!("bad ss_type `{ss_type}`"))?;
    if ss_pos != pos {
        return Err(format!("ss_type `{ss_type}` in the {} file", pos.file_suffix()));
    }
    let w_cnt = usize::from_str_radix(next("w_cnt")?, 16).map_err(|_| "bad w_cnt".to_string())?;
    if w_cnt == 0 {
        return Err("synset with no words".to_string());
    }
    let mut words = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        let word = next("word")?;
        next("lex_id")?;
        words.push(strip_marker(word).to_lowercase());
    }
    let p_cnt: usize = next("p_cnt")?.parse().map_err(|_| "bad p_cnt".to_string())?;
    let mut hypernyms = Vec::new();
    for _ in 0..p_cnt {
        let symbol = next("pointer symbol")?;
        let target: u32 = next("pointer offset")?
            .parse()
            .map_err(|_| "bad pointer offset".to_string())?;
        let target_pos = next("pointer pos")?;
        next("pointer source/target")?;
        let is_hypernym = symbol == "@" || (symbol == "@i" && opts.include_instance_hypernyms);
        if is_hypernym {
            let tpos = target_pos
                .chars()
                .next()
                .and_then(Pos::from_wn_char)
                .ok_or_else(|| format!("bad pointer pos `{target_pos}`"))?;
            let tid = SynsetId::new(tpos, target);
            if tid == SynsetId::new(pos, offset) {
                return Err("synset lists itself as hypernym".to_string());
            }
            if !hypernyms.contains(&tid) {
                hypernyms.push(tid);
            }
        }
    }
    Ok((
        offset,
        RawSynset {
            lexname,
            words,
            hypernyms,
            line: lineno,
        },
    ))
}

/// Drops adjective position markers such as `(a)`, `(p)`, `(ip)`.
fn strip_marker(word: &str) -> &str {
    match word.find('(') {
        Some(i) if word.ends_with(')') => &word[..i],
        _ => word,
    }
}

/// `lemma pos synset_cnt p_cnt [ptr...] sense_cnt tagsense_cnt offset...`
fn parse_index_line(line: &str) -> std::result::Result<(&str, Vec<u32>), String> {
    let f: Vec<&str> = line.split_ascii_whitespace().collect();
    if f.len() < 6 {
        return Err("truncated index line".to_string());
    }
    let lemma = f[0];
    let synset_cnt: usize = f[2].parse().map_err(|_| "bad synset_cnt".to_string())?;
    let p_cnt: usize = f[3].parse().map_err(|_| "bad p_cnt".to_string())?;
    let first = 4 + p_cnt + 2;
    if f.len() != first + synset_cnt {
        return Err(format!(
            "expected {synset_cnt} synset offsets, found {}",
            f.len().saturating_sub(first)
        ));
    }
    let offsets = f[first..]
        .iter()
        .map(|o| o.parse().map_err(|_| format!("bad synset offset `{o}`")))
        .collect::<std::result::Result<Vec<u32>, String>>()?;
    Ok((lemma, offsets))
}
