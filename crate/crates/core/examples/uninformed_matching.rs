//! Uninformed sense matching: rank every sense in the store.
//!
//! ```text
//! cargo run --example uninformed_matching
//! ```

use std::path::PathBuf;

use monosense::embed::{self, vex};
use monosense::evaluate::{self, Similarity, UsmIndex};
use monosense::inventory;
use monosense::propagate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let inv = inventory::load_tsv_inventory(fixtures.join("toy_inventory.tsv"))?;
    let fw = evaluate::parse_framework(&fixtures.join("toy.data.xml"), &fixtures.join("toy.gold.key.txt"))?;
    let (instances, _) = evaluate::attach_contexts(&fw.instances, &vex::read_store(fixtures.join("contexts.vex"))?);
    let seed = embed::merge(
        &vex::read_store(fixtures.join("base.vex"))?,
        &embed::aggregate_occurrences(&vex::read_store(fixtures.join("occurrences.vex"))?)?,
    )?;
    let full = propagate::propagate_full(&seed, &inv)?;

    let k = 3;
    let index = UsmIndex::new(&full, Similarity::Cosine);
    let first = &instances[0];
    println!("top {k} for {} ({}):", first.id, first.lemma);
    for (key, score) in index.rank(&first.context, k)? {
        println!("  {score:.4}  {key}");
    }

    let (preds, rankings) = evaluate::predict_usm(&instances, &full, k, Similarity::Cosine)?;
    let report = evaluate::score(&preds, Some(&rankings), &fw.gold, k)?;
    print!("{}", evaluate::format_table(&report.dataset_rows(), Some(k)));
    Ok(())
}
