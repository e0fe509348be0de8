//! Turn per-occurrence vectors into sense vectors and merge two stores.
//!
//! ```text
//! cargo run --example aggregate_vectors
//! ```

use std::path::PathBuf;

use monosense::embed::{self, vex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let occurrences = vex::read_store(fixtures.join("occurrences.vex"))?;
    let base = vex::read_store(fixtures.join("base.vex"))?;

    let senses = embed::aggregate_occurrences(&occurrences)?;
    println!(
        "{} occurrences -> {} sense vectors (dim {})",
        occurrences.len(),
        senses.len(),
        senses.dim()
    );
    for (key, entry) in senses.iter().take(4) {
        println!("  {key}  count {}  {:.3?}", entry.count, entry.vector);
    }

    // Only the first two occurrences of each sense.
    let mut capped = occurrences.clone();
    capped.retain(|id| embed::split_occurrence_id(id).is_some_and(|(_, n)| n < 2));
    println!("cap 2 keeps {} occurrences", capped.len());

    let merged = embed::merge(&base, &senses)?;
    println!("merged with base store: {} senses", merged.len());

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("senses.vex");
    vex::write_store(&merged, &path)?;
    let back = vex::read_store(&path)?;
    let exact = merged.iter().all(|(k, e)| {
        back.vector(k)
            .is_some_and(|v| v.iter().zip(&e.vector).all(|(a, b)| a.to_bits() == b.to_bits()))
    });
    println!("VEX round trip bit-exact: {exact}");
    Ok(())
}
