//! Normalized inventory TSV, one synset per line:
//!
//! ```text
//! pos:offset <TAB> lexname_id <TAB> key,key,... <TAB> hyp,hyp,... [<TAB> n,n,...]
//! ```
//!
//! The optional fifth column gives the sense number of each key within its
//! lemma's candidate list. Without it, candidate order is file order.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use super::{Lexname, SenseInventory, SenseKey, Synset, SynsetId};
use crate::error::{Error, Result};
use crate::pos::Pos;

pub fn load_tsv_inventory(path: impl AsRef<Path>) -> Result<SenseInventory> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_tsv(path, &text)
}

pub(crate) fn parse_tsv(path: &Path, text: &str) -> Result<SenseInventory> {
    let mut synsets = Vec::new();
    let mut seen_keys = HashSet::new();
    let mut numbered: Vec<(SenseKey, usize)> = Vec::new();
    let mut any_numbers = false;
    let mut all_numbers = true;

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 && cols.len() != 5 {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected 4 or 5 columns, found {}", cols.len()),
            ));
        }
        let id: SynsetId = cols[0].parse().map_err(|m: String| Error::parse(path, lineno, m))?;
        let lex: u8 = cols[1]
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad lexname id `{}`", cols[1])))?;
        let lexname = Lexname::new(lex).map_err(|_| Error::parse(path, lineno, format!("unknown lexname id {lex}")))?;
        let mut members = Vec::new();
        for k in split_list(cols[2]) {
            let key = SenseKey::parse(k).map_err(|e| Error::parse(path, lineno, e.to_string()))?;
            if !seen_keys.insert(key.clone()) {
                return Err(Error::parse(path, lineno, format!("duplicate sense key {key}")));
            }
            members.push(key);
        }
        let hypernyms = split_list(cols[3])
            .map(|h| h.parse().map_err(|m: String| Error::parse(path, lineno, m)))
            .collect::<Result<Vec<SynsetId>>>()?;

        match cols.get(4) {
            Some(nums) => {
                any_numbers = true;
                let nums: Vec<&str> = split_list(nums).collect();
                if nums.len() != members.len() {
                    return Err(Error::parse(
                        path,
                        lineno,
                        "sense-number column does not match the key list",
                    ));
                }
                for (key, n) in members.iter().zip(nums) {
                    let n: usize = n
                        .parse()
                        .map_err(|_| Error::parse(path, lineno, format!("bad sense number `{n}`")))?;
                    numbered.push((key.clone(), n));
                }
            }
            None => all_numbers = false,
        }

        synsets.push(Synset {
            id,
            members,
            hypernyms,
            lexname,
        });
    }

    let lemma_lists = if any_numbers {
        if !all_numbers {
            return Err(Error::parse(path, 0, "sense-number column present on some lines only"));
        }
        let mut lists: HashMap<(String, Pos), Vec<(usize, SenseKey)>> = HashMap::new();
        for (key, n) in numbered {
            lists
                .entry((key.lemma().to_string(), key.pos()))
                .or_default()
                .push((n, key));
        }
        let mut out = HashMap::with_capacity(lists.len());
        for (pair, mut keys) in lists {
            keys.sort();
            if keys.iter().enumerate().any(|(i, (n, _))| *n != i + 1) {
                return Err(Error::parse(
                    path,
                    0,
                    format!("sense numbers of {}/{} are not 1..{}", pair.0, pair.1, keys.len()),
                ));
            }
            out.insert(pair, keys.into_iter().map(|(_, k)| k).collect());
        }
        Some(out)
    } else {
        let mut lists: HashMap<(String, Pos), Vec<SenseKey>> = HashMap::new();
        for s in &synsets {
            for key in &s.members {
                lists
                    .entry((key.lemma().to_string(), key.pos()))
                    .or_default()
                    .push(key.clone());
            }
        }
        Some(lists)
    };

    SenseInventory::from_synsets(synsets, lemma_lists)
}

fn split_list(col: &str) -> impl Iterator<Item = &str> {
    col.split(',').filter(|s| !s.is_empty())
}

pub(crate) fn write_tsv<W: Write>(inv: &SenseInventory, mut w: W) -> std::io::Result<()> {
    for s in inv.synsets() {
        let keys: Vec<&str> = s.members.iter().map(SenseKey::as_str).collect();
        let hyps: Vec<String> = s.hypernyms.iter().map(ToString::to_string).collect();
        let nums: Vec<String> = s
            .members
            .iter()
            .map(|k| inv.sense_number(k).expect("member is a candidate").to_string())
            .collect();
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}",
            s.id,
            s.lexname.id(),
            keys.join(","),
            hyps.join(","),
            nums.join(",")
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SenseInventory> {
        parse_tsv(Path::new("fixture.tsv"), text)
    }

    #[test]
    fn chain_fixture_has_two_edges() {
        let inv = parse(
            "n:00000001\t3\troot%1:03:00::\t\n\
             n:00000002\t3\tmid%1:03:00::\tn:00000001\n\
             n:00000003\t6\tleaf%1:06:00::\tn:00000002\n",
        )
        .unwrap();
        let edges: usize = inv.synsets().map(|s| s.hypernyms.len()).sum();
        assert_eq!(edges, 2);
    }

    #[test]
    fn sense_in_two_synsets_is_rejected() {
        let err = parse(
            "n:00000001\t3\tx%1:03:00::\t\n\
             n:00000002\t3\tx%1:03:00::\t\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn unknown_lexname_is_rejected() {
        let err = parse("n:00000001\t45\tx%1:03:00::\t\n").unwrap_err();
        assert!(err.to_string().contains("lexname"));
    }

    #[test]
    fn sense_numbers_control_candidate_order() {
        let inv = parse(
            "n:00000001\t3\tbank%1:03:00::\t\t2\n\
             n:00000002\t3\tbank%1:03:01::\t\t1\n",
        )
        .unwrap();
        assert_eq!(inv.candidates("bank", Pos::Noun)[0].as_str(), "bank%1:03:01::");
        let again = parse(&inv.to_tsv_string()).unwrap();
        assert_eq!(again, inv);
    }
}
