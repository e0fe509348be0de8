//! Acceptance report: one PASS / FAIL / NOT RUN line per criterion.
//!
//! Runs without the libtest harness so the report is always printed. A
//! failing criterion does not fail `cargo test`; the lines are the result.
//! Data-dependent criteria read WordNet from `data/wordnet` (or
//! `MONOSENSE_WORDNET_DIR`) and SemCor from `MONOSENSE_SEMCOR_XML` /
//! `MONOSENSE_SEMCOR_GOLD` (default `data/semcor/semcor.data.xml` and
//! `semcor.gold.key.txt`).

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use common::*;
use monosense::embed::{self, VectorStore};
use monosense::evaluate::{self, InformedOptions, Similarity};
use monosense::harvest::{self, AnnotatedSentence, CapStrategy, HarvestConfig};
use monosense::inventory::{self, SenseInventory};
use monosense::propagate::{self, uniqueness_ratio};
use monosense::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Outcome {
    Pass(String),
    Fail(String),
    NotRun(String),
}

use Outcome::*;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn within(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

fn within_rel(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs()
}

fn report(name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Fail(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    let (tag, detail) = match &outcome {
        Pass(d) => ("PASS", d),
        Fail(d) => ("FAIL", d),
        NotRun(d) => ("NOT RUN", d),
    };
    println!("[{tag}] {name} ({secs:.1}s): {detail}");
    matches!(outcome, Pass(_))
}

fn wordnet() -> Option<(PathBuf, SenseInventory, Duration)> {
    let dir = wordnet_dir()?;
    let start = Instant::now();
    let inv = inventory::parse_wndb(&dir).expect("WordNet parses");
    Some((dir, inv, start.elapsed()))
}

/// WordNet 3.0 yields about 30k ambiguous and 116k unambiguous (lemma, pos)
/// pairs, within 5%, in under 30 s.
fn inventory_scale(wn: Option<&(PathBuf, SenseInventory, Duration)>) -> Outcome {
    let Some((_, inv, elapsed)) = wn else {
        return NotRun("WordNet not found; run scripts/fetch-wordnet.sh".into());
    };
    let (amb, unamb) = inv.ambiguity_counts();
    let ok_amb = within_rel(amb as f64, 30_000.0, 0.05);
    let ok_unamb = within_rel(unamb as f64, 116_000.0, 0.05);
    let ok_time = elapsed.as_secs_f64() < 30.0;
    check(
        ok_amb && ok_unamb && ok_time,
        format!(
            "ambiguous {amb} (target 30000 +/-5%: {}), unambiguous {unamb} (target 116000 +/-5%: {}), parse {:.1}s (< 30s: {})",
            yes(ok_amb),
            yes(ok_unamb),
            elapsed.as_secs_f64(),
            yes(ok_time)
        ),
    )
}

fn yes(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISS"
    }
}

fn semcor_paths() -> (PathBuf, PathBuf) {
    let root = workspace_root().join("data/semcor");
    let xml = std::env::var_os("MONOSENSE_SEMCOR_XML")
        .map(PathBuf::from)
        .unwrap_or_else(|| root.join("semcor.data.xml"));
    let gold = std::env::var_os("MONOSENSE_SEMCOR_GOLD")
        .map(PathBuf::from)
        .unwrap_or_else(|| root.join("semcor.gold.key.txt"));
    (xml, gold)
}

/// SemCor against WordNet: 26.2 / 7.4 / 16.1 % coverage within 0.2 pp and
/// 198,153 / 27,883 instances within 1%, in under 2 minutes.
fn semcor_row(wn: Option<&(PathBuf, SenseInventory, Duration)>) -> Outcome {
    let (xml, gold) = semcor_paths();
    let Some((_, inv, _)) = wn else {
        return NotRun("WordNet not found; run scripts/fetch-wordnet.sh".into());
    };
    if !xml.exists() || !gold.exists() {
        return NotRun(format!(
            "SemCor framework files not found ({}); set MONOSENSE_SEMCOR_XML / MONOSENSE_SEMCOR_GOLD",
            xml.display()
        ));
    }
    let start = Instant::now();
    let fw = evaluate::parse_framework(&xml, &gold).expect("SemCor parses");
    let mut acc = harvest::CoverageAccumulator::new(inv);
    for inst in &fw.instances {
        acc.add_instance(Some((&inst.lemma, inst.pos)), &fw.gold[&inst.id]);
    }
    let r = acc.finish();
    let elapsed = start.elapsed().as_secs_f64();
    let checks = [
        within(r.coverage_ambiguous(), 26.2, 0.2),
        within(r.coverage_unambiguous(), 7.4, 0.2),
        within(r.coverage_total(), 16.1, 0.2),
        within_rel(r.instances_ambiguous as f64, 198_153.0, 0.01),
        within_rel(r.instances_unambiguous as f64, 27_883.0, 0.01),
        elapsed < 120.0,
    ];
    check(
        checks.iter().all(|&c| c),
        format!(
            "coverage {:.2}/{:.2}/{:.2}% (target 26.2/7.4/16.1 +/-0.2pp), instances {}/{} (target 198153/27883 +/-1%), {elapsed:.1}s",
            r.coverage_ambiguous(),
            r.coverage_unambiguous(),
            r.coverage_total(),
            r.instances_ambiguous,
            r.instances_unambiguous
        ),
    )
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

/// 500 random inventories of at most 100 synsets: exact agreement with the
/// brute-force oracle, full coverage or an uncoverable-lexname error, < 1 min.
fn propagation_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let (mut covered, mut uncoverable, mut mismatches) = (0, 0, Vec::new());
    for trial in 0..500 {
        let n = rng.gen_range(1..=100);
        let inv = random_inventory(&mut rng, n);
        let p = rng.gen_range(0.02..0.9);
        let seed = random_seed(&mut rng, &inv, p, 3);
        match (
            propagate::propagate_full(&seed, &inv),
            brute_force_propagate(&seed, &inv),
        ) {
            (Ok(got), Ok(want)) => {
                let exact = got.len() == inv.num_senses()
                    && want.iter().all(|(k, (v, prov))| {
                        got.get(k)
                            .is_some_and(|e| e.provenance == *prov && bits(&e.vector) == bits(v))
                    });
                if exact {
                    covered += 1;
                } else {
                    mismatches.push(trial);
                }
            }
            (Err(Error::UncoverableLexname(mut a)), Err(mut b)) => {
                a.sort();
                b.sort();
                if a == b {
                    uncoverable += 1;
                } else {
                    mismatches.push(trial);
                }
            }
            _ => mismatches.push(trial),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        mismatches.is_empty() && secs < 60.0,
        format!(
            "{covered} fully covered + {uncoverable} uncoverable-lexname agree with the oracle, {} mismatches {:?}, {secs:.1}s (< 60s)",
            mismatches.len(),
            &mismatches[..mismatches.len().min(5)]
        ),
    )
}

/// Observed grandparent, unobserved parent members: the child gets exactly
/// its direct hypernym's synset embedding.
fn non_transitivity() -> Outcome {
    let (inv, seed) = chain_fixture();
    let p = propagate::propagate_full(&seed, &inv).expect("chain propagates");
    let a1 = p.get("a1%1:06:00::").expect("a1 assigned");
    let want =
        propagate::synset_embeddings(&seed, &inv)[&inv.synset_of(&key("a1%1:06:00::")).unwrap().hypernyms[0]].clone();
    check(
        a1.provenance == propagate::Provenance::FromHypernym && a1.vector[..] == want[..] && want == [2.0, 4.0],
        format!(
            "a1 = {:?} via {:?} (expected [2.0, 4.0] from hypernym)",
            a1.vector, a1.provenance
        ),
    )
}

/// 1NN equals exhaustive argmax on 1,000 instances; MRR / P@K on the
/// four-instance fixture; metric invariance under positive rescaling.
fn nn_and_metrics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let inv = random_inventory(&mut rng, 80);
    let (instances, store) = random_wsd_case(&mut rng, &inv, 1000, 6);
    let (preds, _) = evaluate::predict_informed(&instances, &store, &inv, InformedOptions::default());
    let nn_agree = instances
        .iter()
        .filter(|i| preds[&i.id] == exhaustive_informed(i, &store, &inv))
        .count();

    let (p, rankings, gold) = mrr_fixture();
    let r5 = evaluate::score(&p, Some(&rankings), &gold, 5).unwrap();
    let r1 = evaluate::score(&p, Some(&rankings), &gold, 1).unwrap();
    let r2 = evaluate::score(&p, Some(&rankings), &gold, 2).unwrap();
    let fixture_ok = r5.mrr == Some(0.4375)
        && r5.p_at_k == Some(0.75)
        && r1.p_at_k == Some(0.25)
        && r2.p_at_k == Some(0.5)
        && r5.f1 == 0.25;

    let gold_first: evaluate::GoldKey = instances
        .iter()
        .map(|i| (i.id.clone(), vec![inv.candidates(&i.lemma, i.pos)[0].clone()]))
        .collect();
    let run = |s: &VectorStore| {
        let (p, _) = evaluate::predict_informed(&instances, s, &inv, InformedOptions::default());
        let informed = evaluate::score(&p, None, &gold_first, 1).unwrap();
        let (up, ur) = evaluate::predict_usm(&instances, s, 10, Similarity::Cosine).unwrap();
        let usm = evaluate::score(&up, Some(&ur), &gold_first, 10).unwrap();
        (informed.f1, usm.f1, usm.p_at_k, usm.mrr)
    };
    let base = run(&store);
    let scales = [0.5, 2.0, 3.7, 1e3, 1e-3];
    let invariant = scales.iter().all(|&c| {
        let mut s = store.clone();
        s.scale(c);
        run(&s) == base
    });
    check(
        nn_agree == instances.len() && fixture_ok && invariant,
        format!(
            "1NN agrees on {nn_agree}/{} instances; fixture MRR {:?} P@1/2/5 {:?}/{:?}/{:?} (expected 0.4375, 0.25/0.5/0.75); rescaling by {scales:?} invariant: {}",
            instances.len(),
            r5.mrr,
            r1.p_at_k,
            r2.p_at_k,
            r5.p_at_k,
            yes(invariant)
        ),
    )
}

fn harvest_text(inv: &SenseInventory, input: &str, cfg: &HarvestConfig) -> String {
    let mut out = Vec::new();
    harvest::harvest_jsonl(inv, input.as_bytes(), Path::new("acceptance.jsonl"), cfg, &mut out).unwrap();
    String::from_utf8(out).unwrap()
}

/// Cap recount, monosemy of every annotation, byte-identical reruns across
/// worker counts, and the entity-filter fixture.
fn harvest_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let inv = random_inventory(&mut rng, 60);
    let lemmas: Vec<(String, &'static str)> = inv
        .lemma_entries()
        .map(|(l, p, _)| (l.to_string(), if p == monosense::Pos::Noun { "n" } else { "v" }))
        .collect();
    let sentences: Vec<AnnotatedSentence> = (0..400)
        .map(|i| {
            let words: Vec<(String, String, &str, bool)> = (0..rng.gen_range(5..12))
                .map(|_| {
                    let (l, p) = &lemmas[rng.gen_range(0..lemmas.len())];
                    (l.replace('_', "-"), l.clone(), *p, false)
                })
                .collect();
            let refs: Vec<(&str, &str, &str, bool)> = words
                .iter()
                .map(|(s, l, p, e)| (s.as_str(), l.as_str(), *p, *e))
                .collect();
            tagged(&format!("doc{}", i / 9), &i.to_string(), &refs)
        })
        .collect();
    let input: String = sentences.iter().map(|s| s.to_json() + "\n").collect();

    let cap = 3;
    let mut cap_ok = true;
    let mut mono_ok = true;
    let mut identical = true;
    let mut annotations = 0;
    for strategy in [CapStrategy::First, CapStrategy::Reservoir { seed: 11 }] {
        let cfg = HarvestConfig {
            cap,
            cap_strategy: strategy,
            ..HarvestConfig::default()
        };
        let mut outputs = Vec::new();
        for threads in [1, 3, 8] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            outputs.push(pool.install(|| harvest_text(&inv, &input, &cfg)));
        }
        identical &= outputs.windows(2).all(|w| w[0] == w[1]);
        // Recount straight from the serialized text.
        let mut counts: HashMap<String, usize> = HashMap::new();
        for line in outputs[0].lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            for a in v["annotations"].as_array().unwrap() {
                let sense = a["sense"].as_str().unwrap().to_string();
                let k = key(&sense);
                mono_ok &= inv.candidates(k.lemma(), k.pos()) == std::slice::from_ref(&k);
                *counts.entry(sense).or_default() += 1;
                annotations += 1;
            }
        }
        cap_ok &= counts.values().all(|&n| n <= cap);
    }

    let inception = inception_inventory();
    let s = inception_sentence();
    let (out, _) = harvest::harvest_sentences(&inception, std::slice::from_ref(&s), &HarvestConfig::default()).unwrap();
    let senses: Vec<&str> = out
        .iter()
        .flat_map(|s| s.annotations.iter().map(|a| a.sense.as_str()))
        .collect();
    let mut allow = HarvestConfig::default();
    allow
        .entity_lemma_allowlist
        .insert(("inception".to_string(), monosense::Pos::Noun));
    let (allowed, _) = harvest::harvest_sentences(&inception, &[s], &allow).unwrap();
    let entity_ok = senses == ["hit%1:04:00::"] && allowed[0].annotations.len() == 2;

    check(
        cap_ok && mono_ok && identical && entity_ok && annotations > 0,
        format!(
            "{annotations} annotations: cap {cap} respected: {}, all monosemous: {}, identical across 1/3/8 workers: {}, entity fixture: {}",
            yes(cap_ok),
            yes(mono_ok),
            yes(identical),
            yes(entity_ok)
        ),
    )
}

/// Extending the seed with vectors for unambiguous senses never decreases
/// the uniqueness ratio, and strictly increases it on the duplicate cluster.
fn uniqueness_property() -> Outcome {
    let (inv, seed, ext) = duplicate_cluster_fixture();
    let before = uniqueness_ratio(&propagate::propagate_full(&seed, &inv).unwrap());
    let merged = embed::merge(&seed, &ext).unwrap();
    let after = uniqueness_ratio(&propagate::propagate_full(&merged, &inv).unwrap());
    let strict = after > before;

    let (cinv, cseed, (k, v)) = uniqueness_counterexample();
    let c_before = uniqueness_ratio(&propagate::propagate_full(&cseed, &cinv).unwrap());
    let mut bigger = cseed.clone();
    bigger.insert(k, v, 1).unwrap();
    let c_after = uniqueness_ratio(&propagate::propagate_full(&bigger, &cinv).unwrap());

    // Random search over synthetic inventories.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut trials, mut decreases) = (0, 0);
    for _ in 0..300 {
        let n = rng.gen_range(2..=40);
        let inv = random_inventory(&mut rng, n);
        let seed = random_seed(&mut rng, &inv, 0.3, 2);
        let Ok(small) = propagate::propagate_full(&seed, &inv) else {
            continue;
        };
        let mut big = seed.clone();
        for k in inv.senses() {
            if !big.contains(k.as_str()) && inv.candidates(k.lemma(), k.pos()).len() == 1 && rng.gen_bool(0.3) {
                big.insert(k.as_str(), random_vector(&mut rng, 2), 1).unwrap();
            }
        }
        let large = propagate::propagate_full(&big, &inv).unwrap();
        trials += 1;
        if uniqueness_ratio(&large) < uniqueness_ratio(&small) {
            decreases += 1;
        }
    }
    let never_decreases = c_after >= c_before && decreases == 0;
    check(
        strict && never_decreases,
        format!(
            "duplicate cluster {before:.3} -> {after:.3} (strict increase: {}); never-decreases: {} (counterexample {c_before:.3} -> {c_after:.3} after adding {k}; random search {decreases}/{trials} decreases)",
            yes(strict),
            yes(never_decreases)
        ),
    )
}

fn headline_wsd() -> Outcome {
    NotRun(
        "requires transformer context vectors for SemCor, the harvested corpus and the evaluation framework; see README 'Full-scale recipe'"
            .into(),
    )
}

fn main() {
    let wn = wordnet();
    let results = [
        report("inventory scale", || inventory_scale(wn.as_ref())),
        report("coverage table SemCor row", || semcor_row(wn.as_ref())),
        report("propagation oracle equivalence", propagation_oracle),
        report("non-transitive hypernym chain", non_transitivity),
        report("1NN and metric oracles", nn_and_metrics),
        report("harvest properties", harvest_properties),
        report("uniqueness ratio under seed extension", uniqueness_property),
        report("headline WSD scores", headline_wsd),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
}
