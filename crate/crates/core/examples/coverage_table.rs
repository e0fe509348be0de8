//! Instance counts and inventory coverage for a gold corpus and a harvest.
//!
//! ```text
//! cargo run --example coverage_table
//! ```

use std::path::PathBuf;

use monosense::evaluate;
use monosense::harvest::{self, CoverageAccumulator, CoverageReport, HarvestConfig};
use monosense::inventory;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let inv = inventory::load_tsv_inventory(fixtures.join("toy_inventory.tsv"))?;

    let gold =
        evaluate::parse_framework(&fixtures.join("toy.data.xml"), &fixtures.join("toy.gold.key.txt"))?.to_annotated();
    let tagged = harvest::read_corpus(&fixtures.join("tagged_corpus.jsonl"))?;
    let (harvested, _) = harvest::harvest_sentences(&inv, &tagged, &HarvestConfig::default())?;

    let rows = [
        ("gold", harvest::coverage_stats(&[&gold], &inv)),
        ("harvest", harvest::coverage_stats(&[&harvested], &inv)),
        ("ALL", harvest::coverage_stats(&[&gold, &harvested], &inv)),
    ];
    println!("{}", CoverageReport::TSV_HEADER);
    for (name, report) in &rows {
        println!("{}", report.tsv_row(name));
    }

    // The accumulator also takes raw (lemma, pos, keys) instances.
    let mut acc = CoverageAccumulator::new(&inv);
    acc.add_instance(Some(("bank", monosense::Pos::Noun)), &["bank%1:06:00::"]);
    let r = acc.finish();
    println!(
        "one bank instance covers {:.1}% of ambiguous senses",
        r.coverage_ambiguous()
    );
    Ok(())
}
