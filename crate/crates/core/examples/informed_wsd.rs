//! Informed WSD: nearest candidate sense, with and without propagation.
//!
//! ```text
//! cargo run --example informed_wsd
//! ```

use std::path::PathBuf;

use monosense::embed::{self, vex};
use monosense::evaluate::{self, InformedOptions};
use monosense::inventory;
use monosense::propagate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let inv = inventory::load_tsv_inventory(fixtures.join("toy_inventory.tsv"))?;
    let fw = evaluate::parse_framework(&fixtures.join("toy.data.xml"), &fixtures.join("toy.gold.key.txt"))?;
    let contexts = vex::read_store(fixtures.join("contexts.vex"))?;
    let (instances, missing) = evaluate::attach_contexts(&fw.instances, &contexts);
    assert!(missing.is_empty());

    let seed = embed::merge(
        &vex::read_store(fixtures.join("base.vex"))?,
        &embed::aggregate_occurrences(&vex::read_store(fixtures.join("occurrences.vex"))?)?,
    )?;
    let full = propagate::propagate_full(&seed, &inv)?;
    let opts = InformedOptions::default();

    let (seed_preds, _) = evaluate::predict_informed(&instances, &seed, &inv, opts);
    let seed_report = evaluate::score(&seed_preds, None, &fw.gold, 1)?;
    let (full_preds, _) = evaluate::predict_informed(&instances, &full, &inv, opts);
    let full_report = evaluate::score(&full_preds, None, &fw.gold, 1)?;

    println!("seed store only:");
    print!("{}", evaluate::format_table(&seed_report.dataset_rows(), None));
    println!("propagated store:");
    print!("{}", evaluate::format_table(&full_report.dataset_rows(), None));

    let t = evaluate::significance_test(&full_report.correct, &seed_report.correct)?;
    println!("paired t-test: t = {:.3}, df = {}, p = {:.4}", t.t, t.df, t.p_value);

    let inst = &instances[1];
    let p = evaluate::disambiguate_informed(inst, &full, &inv, opts)?;
    println!("{} ({}): {} score {:?}", inst.id, inst.lemma, p.sense, p.score);
    Ok(())
}
