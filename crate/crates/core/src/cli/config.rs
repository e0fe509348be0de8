//! Pipeline configuration file (TOML). Command-line flags override it.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InventoryFormat {
    /// Princeton WordNet database directory.
    Wndb,
    /// Normalized one-synset-per-line TSV.
    Tsv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InventorySection {
    pub path: Option<PathBuf>,
    pub format: Option<InventoryFormat>,
    pub include_instance_hypernyms: bool,
}

impl Default for InventorySection {
    fn default() -> Self {
        InventorySection {
            path: None,
            format: None,
            include_instance_hypernyms: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarvestSection {
    pub cap: usize,
    /// `first` or `reservoir`.
    pub cap_strategy: String,
    pub seed: u64,
    pub min_sentence_tokens: usize,
    pub max_sentence_tokens: usize,
    pub entity_allowlist: Option<PathBuf>,
    pub batch_docs: usize,
}

impl Default for HarvestSection {
    fn default() -> Self {
        HarvestSection {
            cap: 100,
            cap_strategy: "first".to_string(),
            seed: 0,
            min_sentence_tokens: 5,
            max_sentence_tokens: 128,
            entity_allowlist: None,
            batch_docs: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub xml: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub contexts: Option<PathBuf>,
    /// `cosine` or `dot`.
    pub similarity: String,
    pub first_sense_fallback: bool,
    pub k: usize,
}

impl Default for EvalSection {
    fn default() -> Self {
        EvalSection {
            xml: None,
            gold: None,
            contexts: None,
            similarity: "cosine".to_string(),
            first_sense_fallback: true,
            k: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub caps: Vec<usize>,
    pub occurrences: Option<PathBuf>,
    pub base: Option<PathBuf>,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            caps: vec![1, 2, 3, 5, 10, 25, 50, 100],
            occurrences: None,
            base: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub workers: Option<usize>,
    /// Relative output paths are resolved against this directory.
    pub output_dir: Option<PathBuf>,
    pub inventory: InventorySection,
    pub harvest: HarvestSection,
    pub eval: EvalSection,
    pub sweep: SweepSection,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<PipelineConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Argument(format!("{}: {}", path.display(), e.message())))
    }

    pub fn output_path(&self, path: &Path) -> PathBuf {
        match &self.output_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg: PipelineConfig = toml::from_str(
            "workers = 2\n[inventory]\npath = \"wn\"\nformat = \"wndb\"\n[harvest]\ncap = 10\n[sweep]\ncaps = [1, 2]\n",
        )
        .unwrap();
        assert_eq!(cfg.workers, Some(2));
        assert_eq!(cfg.inventory.format, Some(InventoryFormat::Wndb));
        assert!(cfg.inventory.include_instance_hypernyms);
        assert_eq!(cfg.harvest.cap, 10);
        assert_eq!(cfg.harvest.min_sentence_tokens, 5);
        assert_eq!(cfg.sweep.caps, vec![1, 2]);
        assert!(toml::from_str::<PipelineConfig>("[harvest]\ncapp = 1\n").is_err());
    }

    #[test]
    fn output_dir_resolution() {
        let cfg = PipelineConfig {
            output_dir: Some("out".into()),
            ..Default::default()
        };
        assert_eq!(cfg.output_path(Path::new("a.vex")), Path::new("out/a.vex"));
        assert_eq!(cfg.output_path(Path::new("/tmp/a.vex")), Path::new("/tmp/a.vex"));
    }
}
