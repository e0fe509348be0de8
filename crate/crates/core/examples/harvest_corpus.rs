//! Annotate the monosemous words of a tagged corpus, with a per-sense cap.
//!
//! ```text
//! cargo run --example harvest_corpus
//! ```

use std::path::PathBuf;

use monosense::harvest::{self, CapStrategy, HarvestConfig};
use monosense::inventory;
use monosense::Pos;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let inv = inventory::load_tsv_inventory(fixtures.join("toy_inventory.tsv"))?;
    let tagged = harvest::read_corpus(&fixtures.join("tagged_corpus.jsonl"))?;

    let mut cfg = HarvestConfig {
        cap: 2,
        ..HarvestConfig::default()
    };
    let (corpus, stats) = harvest::harvest_sentences(&inv, &tagged, &cfg)?;
    println!("first-k cap 2: {}", serde_json::to_string(&stats)?);
    for s in &corpus {
        let notes: Vec<String> = s
            .annotations
            .iter()
            .map(|a| {
                let words: Vec<&str> = s.tokens[a.first..=a.last].iter().map(|t| t.surface.as_str()).collect();
                format!("{} -> {}", words.join(" "), a.sense)
            })
            .collect();
        println!("  {}/{}  {}", s.doc_id, s.sent_id, notes.join("; "));
    }
    println!("occurrence ids: {}", harvest::occurrence_ids(&corpus).join(" "));

    // An entity-tagged "Keypad" is dropped unless its lemma is allowlisted.
    cfg.entity_lemma_allowlist.insert(("keypad".to_string(), Pos::Noun));
    cfg.cap_strategy = CapStrategy::Reservoir { seed: 13 };
    let (sampled, stats) = harvest::harvest_sentences(&inv, &tagged, &cfg)?;
    println!(
        "reservoir cap 2 with allowlist: {} sentences, {} entity discards",
        sampled.len(),
        stats.entity_discarded
    );
    Ok(())
}
