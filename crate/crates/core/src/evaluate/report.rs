//! Per-dataset report rows, as TSV and as an aligned text table.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{dataset_of, EvalReport};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetRow {
    pub dataset: String,
    pub instances: usize,
    pub f1: f64,
    pub p_at_k: Option<f64>,
    pub mrr: Option<f64>,
}

fn frac(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

impl EvalReport {
    /// One row per dataset (instance-id prefix) followed by an `ALL` row.
    pub fn dataset_rows(&self) -> Vec<DatasetRow> {
        #[derive(Default)]
        struct Acc {
            correct: Vec<f64>,
            hits: Vec<f64>,
            rr: Vec<f64>,
        }
        let mut by: BTreeMap<&str, Acc> = BTreeMap::new();
        for (i, id) in self.ids.iter().enumerate() {
            let acc = by.entry(dataset_of(id)).or_default();
            acc.correct.push(self.correct[i] as u8 as f64);
            if let (Some(h), Some(r)) = (&self.hits_at_k, &self.reciprocal_ranks) {
                acc.hits.push(h[i] as u8 as f64);
                acc.rr.push(r[i]);
            }
        }
        let ranked = self.mrr.is_some();
        let mut rows: Vec<DatasetRow> = by
            .into_iter()
            .map(|(name, acc)| DatasetRow {
                dataset: name.to_string(),
                instances: acc.correct.len(),
                f1: frac(&acc.correct),
                p_at_k: ranked.then(|| frac(&acc.hits)),
                mrr: ranked.then(|| frac(&acc.rr)),
            })
            .collect();
        rows.push(DatasetRow {
            dataset: "ALL".to_string(),
            instances: self.instances,
            f1: self.f1,
            p_at_k: self.p_at_k,
            mrr: self.mrr,
        });
        rows
    }

    pub fn to_tsv(&self) -> String {
        let k = self.k.map(|k| k.to_string()).unwrap_or_else(|| "k".to_string());
        let mut out = format!("dataset\tinstances\tf1\tp@{k}\tmrr\n");
        for r in self.dataset_rows() {
            out.push_str(&format!(
                "{}\t{}\t{:.6}\t{}\t{}\n",
                r.dataset,
                r.instances,
                r.f1,
                r.p_at_k.map_or("-".to_string(), |v| format!("{v:.6}")),
                r.mrr.map_or("-".to_string(), |v| format!("{v:.6}")),
            ));
        }
        out
    }
}

/// Text table with percentages, one row per dataset.
pub fn format_table(rows: &[DatasetRow], k: Option<usize>) -> String {
    let pk = format!("P@{}", k.map_or("k".to_string(), |k| k.to_string()));
    let header = [
        "Dataset".to_string(),
        "N".to_string(),
        "F1".to_string(),
        pk,
        "MRR".to_string(),
    ];
    let pct = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{:.1}", 100.0 * v));
    let body: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.dataset.clone(),
                r.instances.to_string(),
                pct(Some(r.f1)),
                pct(r.p_at_k),
                pct(r.mrr),
            ]
        })
        .collect();
    let mut widths = header.clone().map(|h| h.len());
    for row in &body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: &[String; 5]| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(widths).enumerate() {
            if i == 0 {
                s.push_str(&format!("{c:<w$}"));
            } else {
                s.push_str(&format!("  {c:>w$}"));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(&header);
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
    out.push('\n');
    for row in &body {
        out.push_str(&line(row));
    }
    out
}
