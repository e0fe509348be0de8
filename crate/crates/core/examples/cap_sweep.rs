//! WSD F1 as a function of the per-sense cap on harvested examples.
//!
//! ```text
//! cargo run --example cap_sweep
//! ```

use std::path::PathBuf;

use monosense::cli;
use monosense::embed::vex;
use monosense::evaluate::{self, InformedOptions};
use monosense::inventory;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let inv = inventory::load_tsv_inventory(fixtures.join("toy_inventory.tsv"))?;
    let fw = evaluate::parse_framework(&fixtures.join("toy.data.xml"), &fixtures.join("toy.gold.key.txt"))?;
    let (instances, _) = evaluate::attach_contexts(&fw.instances, &vex::read_store(fixtures.join("contexts.vex"))?);
    let occurrences = vex::read_store(fixtures.join("occurrences.vex"))?;
    let base = vex::read_store(fixtures.join("base.vex"))?;

    let rows = cli::sweep(
        &inv,
        &occurrences,
        Some(&base),
        &[1, 2, 3, 5],
        &fw,
        &instances,
        InformedOptions::default(),
    )?;
    println!("cap  senses  F1");
    for r in rows {
        println!("{:>3}  {:>6}  {:.1}", r.cap, r.senses_observed, 100.0 * r.f1);
    }
    Ok(())
}
