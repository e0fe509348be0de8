//! Instance counts and inventory coverage of sense-annotated corpora.

use std::collections::HashMap;

use serde::Serialize;

use super::AnnotatedSentence;
use crate::inventory::{SenseInventory, SenseKey};
use crate::pos::Pos;

/// Running counts over annotated instances. Instances are split by the
/// polysemy of their source lemma; coverage by the polysemy of each sense's
/// own lemma.
#[derive(Debug)]
pub struct CoverageAccumulator<'a> {
    inv: &'a SenseInventory,
    examples: HashMap<SenseKey, usize>,
    instances_ambiguous: usize,
    instances_unambiguous: usize,
    unknown_instances: usize,
    unknown_keys: usize,
}

impl<'a> CoverageAccumulator<'a> {
    pub fn new(inv: &'a SenseInventory) -> Self {
        CoverageAccumulator {
            inv,
            examples: HashMap::new(),
            instances_ambiguous: 0,
            instances_unambiguous: 0,
            unknown_instances: 0,
            unknown_keys: 0,
        }
    }

    /// Adds one annotated instance. `source` is the instance's lemma and POS
    /// when known; otherwise the first resolvable key decides ambiguity.
    /// Keys missing from the inventory are counted and ignored.
    pub fn add_instance<K: AsRef<str>>(&mut self, source: Option<(&str, Pos)>, keys: &[K]) {
        let mut known = Vec::with_capacity(keys.len());
        for k in keys {
            match self.inv.sense_key(k.as_ref()) {
                Some(key) => known.push(key),
                None => self.unknown_keys += 1,
            }
        }
        let Some(first) = known.first() else {
            self.unknown_instances += 1;
            return;
        };
        let ambiguous = match source {
            Some((lemma, pos)) if self.inv.contains_lemma(lemma, pos) => self.inv.candidates(lemma, pos).len() > 1,
            _ => self.inv.is_ambiguous_sense(first),
        };
        if ambiguous {
            self.instances_ambiguous += 1;
        } else {
            self.instances_unambiguous += 1;
        }
        for key in known {
            *self.examples.entry(key.clone()).or_insert(0) += 1;
        }
    }

    pub fn add_corpus(&mut self, corpus: &[AnnotatedSentence]) {
        for s in corpus {
            for a in &s.annotations {
                self.add_instance(None, std::slice::from_ref(&a.sense));
            }
        }
    }

    pub fn finish(&self) -> CoverageReport {
        let (mut inv_amb, mut inv_unamb) = (0, 0);
        for key in self.inv.senses() {
            if self.inv.is_ambiguous_sense(key) {
                inv_amb += 1;
            } else {
                inv_unamb += 1;
            }
        }
        let (mut cov_amb, mut cov_unamb) = (0, 0);
        for key in self.examples.keys() {
            if self.inv.is_ambiguous_sense(key) {
                cov_amb += 1;
            } else {
                cov_unamb += 1;
            }
        }
        let examples: usize = self.examples.values().sum();
        CoverageReport {
            instances_ambiguous: self.instances_ambiguous,
            instances_unambiguous: self.instances_unambiguous,
            unknown_instances: self.unknown_instances,
            unknown_keys: self.unknown_keys,
            covered_ambiguous: cov_amb,
            covered_unambiguous: cov_unamb,
            inventory_ambiguous: inv_amb,
            inventory_unambiguous: inv_unamb,
            avg_examples: if self.examples.is_empty() {
                0.0
            } else {
                examples as f64 / self.examples.len() as f64
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub instances_ambiguous: usize,
    pub instances_unambiguous: usize,
    pub unknown_instances: usize,
    pub unknown_keys: usize,
    pub covered_ambiguous: usize,
    pub covered_unambiguous: usize,
    pub inventory_ambiguous: usize,
    pub inventory_unambiguous: usize,
    /// Annotations per covered sense.
    pub avg_examples: f64,
}

fn pct(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        100.0 * n as f64 / d as f64
    }
}

impl CoverageReport {
    pub fn instances(&self) -> usize {
        self.instances_ambiguous + self.instances_unambiguous
    }

    pub fn coverage_ambiguous(&self) -> f64 {
        pct(self.covered_ambiguous, self.inventory_ambiguous)
    }

    pub fn coverage_unambiguous(&self) -> f64 {
        pct(self.covered_unambiguous, self.inventory_unambiguous)
    }

    pub fn coverage_total(&self) -> f64 {
        pct(
            self.covered_ambiguous + self.covered_unambiguous,
            self.inventory_ambiguous + self.inventory_unambiguous,
        )
    }

    pub const TSV_HEADER: &'static str =
        "corpus\tinstances_ambiguous\tinstances_unambiguous\tavg_examples\tcoverage_ambiguous\tcoverage_unambiguous\tcoverage_total";

    pub fn tsv_row(&self, name: &str) -> String {
        format!(
            "{name}\t{}\t{}\t{:.1}\t{:.1}\t{:.1}\t{:.1}",
            self.instances_ambiguous,
            self.instances_unambiguous,
            self.avg_examples,
            self.coverage_ambiguous(),
            self.coverage_unambiguous(),
            self.coverage_total()
        )
    }
}

/// Coverage of the union of several annotated corpora.
pub fn coverage_stats(corpora: &[&[AnnotatedSentence]], inv: &SenseInventory) -> CoverageReport {
    let mut acc = CoverageAccumulator::new(inv);
    for c in corpora {
        acc.add_corpus(c);
    }
    acc.finish()
}
