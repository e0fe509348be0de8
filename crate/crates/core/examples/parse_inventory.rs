//! Load a sense inventory and query it.
//!
//! ```text
//! cargo run --example parse_inventory                    # toy TSV fixture
//! cargo run --release --example parse_inventory -- data/wordnet
//! ```

use std::path::PathBuf;

use monosense::inventory::{self, SenseKey};
use monosense::Pos;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/toy_inventory.tsv"));
    let started = std::time::Instant::now();
    let inv = if path.is_dir() {
        inventory::parse_wndb(&path)?
    } else {
        inventory::load_tsv_inventory(&path)?
    };
    let (ambiguous, unambiguous) = inv.ambiguity_counts();
    println!(
        "{}: {} synsets, {} senses, {} lemmas ({ambiguous} ambiguous, {unambiguous} unambiguous) in {:.2?}",
        path.display(),
        inv.num_synsets(),
        inv.num_senses(),
        inv.num_lemmas(),
        started.elapsed()
    );

    for (lemma, pos) in [("keypad", Pos::Noun), ("bank", Pos::Noun), ("mouse", Pos::Noun)] {
        let candidates = inv.candidates(lemma, pos);
        println!(
            "{lemma}/{pos}: {} sense(s), monosemous = {}",
            candidates.len(),
            inv.is_monosemous(lemma, pos)
        );
        for key in candidates.iter().take(3) {
            let synset = inv.synset_of(key).expect("candidates belong to synsets");
            let hypernyms: Vec<String> = synset.hypernyms.iter().map(|h| h.to_string()).collect();
            println!(
                "  #{} {key}  synset {} ({}), hypernyms [{}]",
                inv.sense_number(key).unwrap_or(0),
                synset.id,
                synset.lexname,
                hypernyms.join(", ")
            );
        }
    }

    let key = SenseKey::parse("keypad%1:06:00::")?;
    println!(
        "sense key {key}: lemma {}, pos {}, lexicographer file {}",
        key.lemma(),
        key.pos(),
        key.lex_filenum()
    );
    Ok(())
}
