//! Fill every inventory sense from a partial seed store.
//!
//! ```text
//! cargo run --example propagate_coverage
//! ```

use std::path::PathBuf;

use monosense::embed::{self, vex};
use monosense::inventory;
use monosense::propagate::{self, uniqueness_ratio};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let inv = inventory::load_tsv_inventory(fixtures.join("toy_inventory.tsv"))?;
    let base = vex::read_store(fixtures.join("base.vex"))?;
    let harvested = embed::aggregate_occurrences(&vex::read_store(fixtures.join("occurrences.vex"))?)?;
    let seed = embed::merge(&base, &harvested)?;

    let full = propagate::propagate_full(&seed, &inv)?;
    println!(
        "seed covers {} of {} senses; after propagation {} (uniqueness {:.3})",
        seed.len(),
        inv.num_senses(),
        full.len(),
        uniqueness_ratio(&full)
    );
    for (provenance, n) in full.provenance_counts() {
        println!("  {provenance:<14} {n}");
    }
    for (key, entry) in full.iter() {
        if entry.provenance != propagate::Provenance::Observed {
            println!("  {key:<20} {:<14} {:.3?}", entry.provenance.as_str(), entry.vector);
        }
    }

    // With only the top concept observed, everything else falls back to a
    // lexname vector or is uncoverable.
    let mut tiny = embed::VectorStore::new(seed.dim());
    let top = seed.get("entity%1:03:00::").expect("fixture seed has entity");
    tiny.insert("entity%1:03:00::", top.vector.clone(), top.count)?;
    match propagate::propagate_full(&tiny, &inv) {
        Ok(p) => println!("tiny seed: {} senses", p.len()),
        Err(e) => println!("tiny seed: {e}"),
    }
    Ok(())
}
