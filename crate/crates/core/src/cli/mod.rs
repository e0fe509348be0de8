//! The `monosense` command line.
//!
//! Every subcommand writes its artifact atomically and leaves a JSON run
//! manifest (`<output>.manifest.json`) next to it. Failures print one line,
//! `ERROR <stage>: <message>`, and exit with 1 (usage), 2 (data) or
//! 3 (integrity).

mod config;
mod manifest;

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::embed::{self, VectorStore};
use crate::error::{Error, Result};
use crate::evaluate::{self, Framework, InformedOptions, Similarity};
use crate::harvest::{self, CapStrategy, CoverageAccumulator, HarvestConfig, NaiveTagger};
use crate::inventory::{self, SenseInventory, WndbOptions};
use crate::propagate::{self, uniqueness_ratio};

pub use config::{InventoryFormat, PipelineConfig};
pub use manifest::{manifest_path, Manifest};

#[derive(Debug, Parser)]
#[command(
    name = "monosense",
    version,
    about = "Monosemous-word sense annotation, propagation and evaluation"
)]
pub struct Cli {
    /// Pipeline configuration file (TOML); flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct InventoryArgs {
    /// WordNet database directory or normalized TSV file.
    #[arg(long)]
    pub inventory: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub inventory_format: Option<InventoryFormat>,
    /// Ignore instance-hypernym (`@i`) pointers.
    #[arg(long)]
    pub no_instance_hypernyms: bool,
}

#[derive(Debug, Args, Clone, Default)]
pub struct EvalArgs {
    /// Framework corpus XML.
    #[arg(long)]
    pub xml: Option<PathBuf>,
    /// Framework gold key file.
    #[arg(long)]
    pub gold: Option<PathBuf>,
    /// VEX file of context vectors keyed by instance id.
    #[arg(long)]
    pub contexts: Option<PathBuf>,
    /// `cosine` or `dot`.
    #[arg(long)]
    pub similarity: Option<Similarity>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Annotate monosemous words in tagged JSONL (or raw text) corpora.
    Harvest {
        #[command(flatten)]
        inv: InventoryArgs,
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
        /// `first` or `reservoir`.
        #[arg(long)]
        cap_strategy: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        entity_allowlist: Option<PathBuf>,
        #[arg(long)]
        min_tokens: Option<usize>,
        #[arg(long)]
        max_tokens: Option<usize>,
        /// Inputs are plain text, one sentence per line, tagged with the
        /// built-in dictionary tagger.
        #[arg(long)]
        raw_text: bool,
    },
    /// Keep the first k annotations per sense of a harvested corpus.
    Subset {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cap: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Average occurrence vectors (keys `sense#n`) into sense vectors.
    Aggregate {
        #[arg(long)]
        input: PathBuf,
        /// Only use occurrences annotated in this corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Count-weighted merge of sense vector stores.
    Merge {
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Fill every inventory sense from synset, hypernym and lexname vectors.
    Propagate {
        #[command(flatten)]
        inv: InventoryArgs,
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Informed WSD: 1NN among the lemma's candidate senses.
    EvalWsd {
        #[command(flatten)]
        inv: InventoryArgs,
        #[command(flatten)]
        eval: EvalArgs,
        #[arg(long)]
        store: PathBuf,
        /// Second store to compare against with a paired t-test.
        #[arg(long)]
        baseline: Option<PathBuf>,
        #[arg(long)]
        no_fallback: bool,
        #[arg(long)]
        output: PathBuf,
    },
    /// Uninformed sense matching: rank the whole store.
    EvalUsm {
        #[command(flatten)]
        eval: EvalArgs,
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Instance counts and inventory coverage of annotated corpora.
    Stats {
        #[command(flatten)]
        inv: InventoryArgs,
        /// Harvested JSONL corpus (repeatable).
        #[arg(long)]
        corpus: Vec<PathBuf>,
        /// Framework XML of a gold-annotated corpus; pair with --gold.
        #[arg(long, requires = "gold")]
        framework: Option<PathBuf>,
        #[arg(long)]
        gold: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
    /// For each cap: select, aggregate, merge, propagate, evaluate.
    Sweep {
        #[command(flatten)]
        inv: InventoryArgs,
        #[command(flatten)]
        eval: EvalArgs,
        /// Occurrence vectors of the harvested corpus (keys `sense#n`).
        #[arg(long)]
        occurrences: Option<PathBuf>,
        /// Sense store merged with every cap's vectors.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        caps: Option<Vec<usize>>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Export a propagated store for 2-D projection plots.
    ExportProj {
        #[command(flatten)]
        inv: InventoryArgs,
        /// Propagated VEX store with its provenance sidecar.
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

impl Command {
    pub fn stage(&self) -> &'static str {
        match self {
            Command::Harvest { .. } => "harvest",
            Command::Subset { .. } => "subset",
            Command::Aggregate { .. } => "aggregate",
            Command::Merge { .. } => "merge",
            Command::Propagate { .. } => "propagate",
            Command::EvalWsd { .. } => "eval-wsd",
            Command::EvalUsm { .. } => "eval-usm",
            Command::Stats { .. } => "stats",
            Command::Sweep { .. } => "sweep",
            Command::ExportProj { .. } => "export-proj",
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("ERROR usage: {first}");
            return 1;
        }
    };
    let stage = cli.command.stage();
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("ERROR {stage}: {msg}");
            e.class().exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if cli.workers.is_some() {
        cfg.workers = cli.workers;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.workers {
        if n == 0 {
            return Err(Error::Argument("--workers must be at least 1".to_string()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Argument(format!("cannot start worker pool: {e}")))?;
    pool.install(|| dispatch(cli.command, &cfg))
}

fn require_inputs(paths: &[&Path]) -> Result<()> {
    for p in paths {
        if !p.exists() {
            return Err(Error::MissingFile(p.to_path_buf()));
        }
    }
    Ok(())
}

fn required<'a>(value: Option<&'a PathBuf>, flag: &str) -> Result<&'a PathBuf> {
    value.ok_or_else(|| Error::Argument(format!("--{flag} is required (flag or config file)")))
}

struct ResolvedInventory {
    path: PathBuf,
    format: InventoryFormat,
    include_instance_hypernyms: bool,
}

fn resolve_inventory(args: &InventoryArgs, cfg: &PipelineConfig) -> Result<ResolvedInventory> {
    let path = required(args.inventory.as_ref().or(cfg.inventory.path.as_ref()), "inventory")?.clone();
    let format = args
        .inventory_format
        .or(cfg.inventory.format)
        .unwrap_or(if path.is_dir() {
            InventoryFormat::Wndb
        } else {
            InventoryFormat::Tsv
        });
    Ok(ResolvedInventory {
        path,
        format,
        include_instance_hypernyms: cfg.inventory.include_instance_hypernyms && !args.no_instance_hypernyms,
    })
}

fn load_inventory(r: &ResolvedInventory) -> Result<SenseInventory> {
    match r.format {
        InventoryFormat::Wndb => inventory::parse_wndb_with(
            &r.path,
            WndbOptions {
                include_instance_hypernyms: r.include_instance_hypernyms,
            },
        ),
        InventoryFormat::Tsv => inventory::load_tsv_inventory(&r.path),
    }
}

fn inventory_json(r: &ResolvedInventory) -> serde_json::Value {
    json!({
        "path": r.path,
        "format": r.format,
        "include_instance_hypernyms": r.include_instance_hypernyms,
    })
}

struct ResolvedEval {
    xml: PathBuf,
    gold: PathBuf,
    contexts: PathBuf,
    similarity: Similarity,
}

fn resolve_eval(args: &EvalArgs, cfg: &PipelineConfig) -> Result<ResolvedEval> {
    let similarity = match args.similarity {
        Some(s) => s,
        None => cfg.eval.similarity.parse().map_err(Error::Argument)?,
    };
    Ok(ResolvedEval {
        xml: required(args.xml.as_ref().or(cfg.eval.xml.as_ref()), "xml")?.clone(),
        gold: required(args.gold.as_ref().or(cfg.eval.gold.as_ref()), "gold")?.clone(),
        contexts: required(args.contexts.as_ref().or(cfg.eval.contexts.as_ref()), "contexts")?.clone(),
        similarity,
    })
}

impl ResolvedEval {
    fn paths(&self) -> [&Path; 3] {
        [&self.xml, &self.gold, &self.contexts]
    }

    fn json(&self) -> serde_json::Value {
        json!({
            "xml": self.xml,
            "gold": self.gold,
            "contexts": self.contexts,
            "similarity": self.similarity,
        })
    }

    /// Framework plus context vectors. Instances without a context vector
    /// stay in the gold map and score as wrong.
    fn load(&self) -> Result<(Framework, Vec<evaluate::EvalInstance>, Vec<String>)> {
        let fw = evaluate::parse_framework(&self.xml, &self.gold)?;
        let contexts = embed::read_store(&self.contexts)?;
        let (instances, missing) = evaluate::attach_contexts(&fw.instances, &contexts);
        let mut warnings = fw.warnings.clone();
        warnings.extend(missing.into_iter().map(|id| format!("no context vector for {id}")));
        Ok((fw, instances, warnings))
    }
}

fn finish(
    command: &str,
    config: serde_json::Value,
    inputs: &[&Path],
    outputs: &[&Path],
    summary: serde_json::Value,
) -> Result<()> {
    let manifest = Manifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION"),
        inputs: inputs.iter().map(|p| manifest::digest(p)).collect::<Result<_>>()?,
        outputs: outputs.iter().map(|p| manifest::digest(p)).collect::<Result<_>>()?,
        config_sha256: manifest::config_hash(&config),
        config,
        summary,
    };
    manifest.write(outputs[0])
}

fn print_warnings(warnings: &[String]) {
    const SHOWN: usize = 10;
    for w in warnings.iter().take(SHOWN) {
        eprintln!("warning: {w}");
    }
    if warnings.len() > SHOWN {
        eprintln!("warning: ... and {} more", warnings.len() - SHOWN);
    }
}

/// Concatenates files, guaranteeing a line break between them.
fn chained_reader(paths: &[PathBuf]) -> Result<Box<dyn BufRead>> {
    let mut reader: Box<dyn Read> = Box::new(std::io::empty());
    for p in paths {
        let f = File::open(p).map_err(|e| Error::io(p, e))?;
        reader = Box::new(reader.chain(f).chain(&b"\n"[..]));
    }
    Ok(Box::new(BufReader::with_capacity(1 << 20, reader)))
}

fn dispatch(command: Command, cfg: &PipelineConfig) -> Result<()> {
    let stage = command.stage();
    match command {
        Command::Harvest {
            inv,
            input,
            output,
            cap,
            cap_strategy,
            seed,
            entity_allowlist,
            min_tokens,
            max_tokens,
            raw_text,
        } => {
            let rinv = resolve_inventory(&inv, cfg)?;
            let allowlist_path = entity_allowlist.or_else(|| cfg.harvest.entity_allowlist.clone());
            let mut inputs: Vec<&Path> = vec![&rinv.path];
            inputs.extend(input.iter().map(PathBuf::as_path));
            inputs.extend(allowlist_path.as_deref());
            require_inputs(&inputs)?;

            let seed = seed.unwrap_or(cfg.harvest.seed);
            let strategy = match cap_strategy.as_deref().unwrap_or(&cfg.harvest.cap_strategy) {
                "first" => CapStrategy::First,
                "reservoir" => CapStrategy::Reservoir { seed },
                other => {
                    return Err(Error::Argument(format!(
                        "unknown cap strategy `{other}` (expected first or reservoir)"
                    )))
                }
            };
            let hcfg = HarvestConfig {
                cap: cap.unwrap_or(cfg.harvest.cap),
                cap_strategy: strategy,
                entity_lemma_allowlist: match &allowlist_path {
                    Some(p) => harvest::load_entity_allowlist(p)?,
                    None => Default::default(),
                },
                min_sentence_tokens: min_tokens.unwrap_or(cfg.harvest.min_sentence_tokens),
                max_sentence_tokens: max_tokens.unwrap_or(cfg.harvest.max_sentence_tokens),
                batch_docs: cfg.harvest.batch_docs,
            };
            hcfg.validate()?;
            let inventory = load_inventory(&rinv)?;
            let output = cfg.output_path(&output);

            let stats = if raw_text {
                let tagger = match rinv.format {
                    InventoryFormat::Wndb => NaiveTagger::from_dir(&rinv.path)?,
                    InventoryFormat::Tsv => NaiveTagger::new(),
                };
                let mut sentences = Vec::new();
                for p in &input {
                    let doc = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                    let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                        sentences.push(tagger.tag(&inventory, &doc, &(i + 1).to_string(), line));
                    }
                }
                let (corpus, stats) = harvest::harvest_sentences(&inventory, &sentences, &hcfg)?;
                crate::atomic::write_atomic(&output, |f| harvest::write_corpus(&corpus, std::io::BufWriter::new(f)))?;
                stats
            } else {
                let reader = chained_reader(&input)?;
                let origin = input[0].clone();
                crate::atomic::write_atomic_with(&output, |w| {
                    harvest::harvest_jsonl(&inventory, reader, &origin, &hcfg, w)
                })?
            };
            println!(
                "{stage}: {} sentences, {} annotations written to {} ({} docs skipped, {} entity discards, {} over cap)",
                stats.sentences_emitted,
                stats.annotations_emitted,
                output.display(),
                stats.docs_skipped,
                stats.entity_discarded,
                stats.cap_discarded
            );
            let config = json!({
                "inventory": inventory_json(&rinv),
                "inputs": input,
                "raw_text": raw_text,
                "cap": hcfg.cap,
                "cap_strategy": match hcfg.cap_strategy { CapStrategy::First => "first".to_string(), CapStrategy::Reservoir { seed } => format!("reservoir:{seed}") },
                "entity_allowlist": allowlist_path,
                "min_sentence_tokens": hcfg.min_sentence_tokens,
                "max_sentence_tokens": hcfg.max_sentence_tokens,
            });
            finish(
                stage,
                config,
                &inputs,
                &[&output],
                serde_json::to_value(stats).expect("stats serialize"),
            )
        }

        Command::Subset { input, cap, output } => {
            require_inputs(&[&input])?;
            let corpus = harvest::read_corpus(&input)?;
            let subset: Vec<_> = harvest::subset_by_cap(corpus, cap)?.collect();
            let output = cfg.output_path(&output);
            crate::atomic::write_atomic(&output, |f| harvest::write_corpus(&subset, std::io::BufWriter::new(f)))?;
            let annotations: usize = subset.iter().map(|s| s.annotations.len()).sum();
            println!(
                "{stage}: {} sentences, {annotations} annotations (cap {cap})",
                subset.len()
            );
            finish(
                stage,
                json!({ "input": input, "cap": cap }),
                &[&input],
                &[&output],
                json!({ "sentences": subset.len(), "annotations": annotations }),
            )
        }

        Command::Aggregate { input, corpus, output } => {
            let mut inputs: Vec<&Path> = vec![&input];
            inputs.extend(corpus.as_deref());
            require_inputs(&inputs)?;
            let mut occ = embed::read_store(&input)?;
            if let Some(c) = &corpus {
                let ids: std::collections::HashSet<String> =
                    harvest::occurrence_ids(&harvest::read_corpus(c)?).into_iter().collect();
                occ.retain(|k| ids.contains(k));
            }
            let store = embed::aggregate_occurrences(&occ)?;
            let output = cfg.output_path(&output);
            embed::write_store(&store, &output)?;
            println!("{stage}: {} occurrences -> {} senses", occ.len(), store.len());
            finish(
                stage,
                json!({ "input": input, "corpus": corpus }),
                &inputs,
                &[&output],
                json!({ "occurrences": occ.len(), "senses": store.len(), "dim": store.dim() }),
            )
        }

        Command::Merge { input, output } => {
            let inputs: Vec<&Path> = input.iter().map(PathBuf::as_path).collect();
            require_inputs(&inputs)?;
            let mut merged: Option<VectorStore> = None;
            for p in &input {
                let s = embed::read_store(p)?;
                merged = Some(match merged {
                    None => s,
                    Some(m) => embed::merge(&m, &s)?,
                });
            }
            let merged = merged.ok_or_else(|| Error::Argument("nothing to merge".to_string()))?;
            let output = cfg.output_path(&output);
            embed::write_store(&merged, &output)?;
            println!("{stage}: {} keys", merged.len());
            finish(
                stage,
                json!({ "inputs": input }),
                &inputs,
                &[&output],
                json!({ "keys": merged.len() }),
            )
        }

        Command::Propagate { inv, store, output } => {
            let rinv = resolve_inventory(&inv, cfg)?;
            require_inputs(&[&rinv.path, &store])?;
            let inventory = load_inventory(&rinv)?;
            let seed = embed::read_store(&store)?;
            let p = propagate::propagate_full(&seed, &inventory)?;
            let output = cfg.output_path(&output);
            let sidecar = p.write(&output)?;
            let counts: HashMap<String, usize> = p
                .provenance_counts()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            let ratio = uniqueness_ratio(&p);
            let breakdown: Vec<String> = p
                .provenance_counts()
                .into_iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            println!(
                "{stage}: {} senses, uniqueness ratio {ratio:.4}, {}",
                p.len(),
                breakdown.join(" ")
            );
            if p.ignored_seed_keys() > 0 {
                eprintln!(
                    "warning: {} seed keys are not inventory senses and were ignored",
                    p.ignored_seed_keys()
                );
            }
            finish(
                stage,
                json!({ "inventory": inventory_json(&rinv), "store": store }),
                &[&rinv.path, &store],
                &[&output, &sidecar],
                json!({
                    "senses": p.len(),
                    "uniqueness_ratio": ratio,
                    "provenance": counts,
                    "ignored_seed_keys": p.ignored_seed_keys(),
                }),
            )
        }

        Command::EvalWsd {
            inv,
            eval,
            store,
            baseline,
            no_fallback,
            output,
        } => {
            let rinv = resolve_inventory(&inv, cfg)?;
            let reval = resolve_eval(&eval, cfg)?;
            let mut inputs: Vec<&Path> = vec![&rinv.path, &store];
            inputs.extend(reval.paths());
            inputs.extend(baseline.as_deref());
            require_inputs(&inputs)?;
            let inventory = load_inventory(&rinv)?;
            let (fw, instances, mut warnings) = reval.load()?;
            let opts = InformedOptions {
                first_sense_fallback: cfg.eval.first_sense_fallback && !no_fallback,
                similarity: reval.similarity,
            };
            let run = |path: &Path| -> Result<evaluate::EvalReport> {
                let s = embed::read_store(path)?;
                let (preds, w) = evaluate::predict_informed(&instances, &s, &inventory, opts);
                let mut report = evaluate::score(&preds, None, &fw.gold, 1)?;
                report.warnings.extend(w);
                Ok(report)
            };
            let report = run(&store)?;
            warnings.extend(report.warnings.iter().cloned());
            let mut summary = json!({ "instances": report.instances, "f1": report.f1 });
            let mut text = report.to_tsv();
            print!("{}", evaluate::format_table(&report.dataset_rows(), None));
            if let Some(b) = &baseline {
                let base = run(b)?;
                let t = evaluate::significance_test(&report.correct, &base.correct)?;
                println!(
                    "baseline F1 {:.1}, paired t = {:.3}, p = {:.3e}{}",
                    100.0 * base.f1,
                    t.t,
                    t.p_value,
                    if t.degenerate { " (degenerate)" } else { "" }
                );
                text.push_str(&format!(
                    "# baseline_f1\t{:.6}\n# t\t{}\n# p\t{:e}\n",
                    base.f1, t.t, t.p_value
                ));
                summary["baseline_f1"] = json!(base.f1);
                summary["t_test"] = json!(t);
            }
            print_warnings(&warnings);
            let output = cfg.output_path(&output);
            crate::atomic::write_string_atomic(&output, &text)?;
            summary["warnings"] = json!(warnings.len());
            finish(
                stage,
                json!({
                    "inventory": inventory_json(&rinv),
                    "eval": reval.json(),
                    "store": store,
                    "baseline": baseline,
                    "first_sense_fallback": opts.first_sense_fallback,
                }),
                &inputs,
                &[&output],
                summary,
            )
        }

        Command::EvalUsm { eval, store, k, output } => {
            let reval = resolve_eval(&eval, cfg)?;
            let k = k.unwrap_or(cfg.eval.k);
            let mut inputs: Vec<&Path> = vec![&store];
            inputs.extend(reval.paths());
            require_inputs(&inputs)?;
            let (fw, instances, mut warnings) = reval.load()?;
            let s = embed::read_store(&store)?;
            let (preds, rankings) = evaluate::predict_usm(&instances, &s, k, reval.similarity)?;
            let report = evaluate::score(&preds, Some(&rankings), &fw.gold, k)?;
            warnings.extend(report.warnings.iter().cloned());
            print!("{}", evaluate::format_table(&report.dataset_rows(), Some(k)));
            print_warnings(&warnings);
            let output = cfg.output_path(&output);
            crate::atomic::write_string_atomic(&output, &report.to_tsv())?;
            finish(
                stage,
                json!({ "eval": reval.json(), "store": store, "k": k }),
                &inputs,
                &[&output],
                json!({ "instances": report.instances, "f1": report.f1, "p_at_k": report.p_at_k, "mrr": report.mrr }),
            )
        }

        Command::Stats {
            inv,
            corpus,
            framework,
            gold,
            output,
        } => {
            let rinv = resolve_inventory(&inv, cfg)?;
            let mut inputs: Vec<&Path> = vec![&rinv.path];
            inputs.extend(corpus.iter().map(PathBuf::as_path));
            inputs.extend(framework.as_deref());
            inputs.extend(gold.as_deref());
            require_inputs(&inputs)?;
            let inventory = load_inventory(&rinv)?;

            let mut rows = Vec::new();
            let mut union = CoverageAccumulator::new(&inventory);
            if let (Some(x), Some(g)) = (&framework, &gold) {
                let fw = evaluate::parse_framework(x, g)?;
                print_warnings(&fw.warnings);
                let mut acc = CoverageAccumulator::new(&inventory);
                for inst in &fw.instances {
                    let keys = &fw.gold[&inst.id];
                    acc.add_instance(Some((&inst.lemma, inst.pos)), keys);
                    union.add_instance(Some((&inst.lemma, inst.pos)), keys);
                }
                rows.push((corpus_name(x), acc.finish()));
            }
            for c in &corpus {
                let annotated = harvest::read_corpus(c)?;
                let mut acc = CoverageAccumulator::new(&inventory);
                acc.add_corpus(&annotated);
                union.add_corpus(&annotated);
                rows.push((corpus_name(c), acc.finish()));
            }
            if rows.len() > 1 {
                rows.push(("ALL".to_string(), union.finish()));
            }
            let mut text = format!("{}\n", harvest::CoverageReport::TSV_HEADER);
            for (name, r) in &rows {
                text.push_str(&r.tsv_row(name));
                text.push('\n');
            }
            print!("{text}");
            let output = cfg.output_path(&output);
            crate::atomic::write_string_atomic(&output, &text)?;
            let summary: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(n, r)| (n.clone(), serde_json::to_value(r).expect("reports serialize")))
                .collect();
            finish(
                stage,
                json!({ "inventory": inventory_json(&rinv), "corpora": corpus, "framework": framework, "gold": gold }),
                &inputs,
                &[&output],
                serde_json::Value::Object(summary),
            )
        }

        Command::Sweep {
            inv,
            eval,
            occurrences,
            base,
            caps,
            output,
        } => {
            let rinv = resolve_inventory(&inv, cfg)?;
            let reval = resolve_eval(&eval, cfg)?;
            let occurrences = required(occurrences.as_ref().or(cfg.sweep.occurrences.as_ref()), "occurrences")?.clone();
            let base = base.or_else(|| cfg.sweep.base.clone());
            let caps = caps.unwrap_or_else(|| cfg.sweep.caps.clone());
            if caps.is_empty() || caps.contains(&0) {
                return Err(Error::Argument(
                    "caps must be a non-empty list of positive integers".to_string(),
                ));
            }
            let mut inputs: Vec<&Path> = vec![&rinv.path, &occurrences];
            inputs.extend(base.as_deref());
            inputs.extend(reval.paths());
            require_inputs(&inputs)?;

            let inventory = load_inventory(&rinv)?;
            let occ = embed::read_store(&occurrences)?;
            let base_store = base.as_deref().map(embed::read_store).transpose()?;
            let (fw, instances, warnings) = reval.load()?;
            print_warnings(&warnings);
            let opts = InformedOptions {
                first_sense_fallback: cfg.eval.first_sense_fallback,
                similarity: reval.similarity,
            };
            let rows = sweep(&inventory, &occ, base_store.as_ref(), &caps, &fw, &instances, opts)?;
            let mut text = String::from("cap\tsenses_observed\tf1\n");
            for r in &rows {
                text.push_str(&format!("{}\t{}\t{:.6}\n", r.cap, r.senses_observed, r.f1));
            }
            print!("{text}");
            let output = cfg.output_path(&output);
            crate::atomic::write_string_atomic(&output, &text)?;
            finish(
                stage,
                json!({
                    "inventory": inventory_json(&rinv),
                    "eval": reval.json(),
                    "occurrences": occurrences,
                    "base": base,
                    "caps": caps,
                    "first_sense_fallback": opts.first_sense_fallback,
                }),
                &inputs,
                &[&output],
                serde_json::to_value(&rows).expect("rows serialize"),
            )
        }

        Command::ExportProj { inv, store, output } => {
            let rinv = resolve_inventory(&inv, cfg)?;
            let sidecar = propagate::sidecar_path(&store);
            require_inputs(&[&rinv.path, &store, &sidecar])?;
            let inventory = load_inventory(&rinv)?;
            let p = propagate::read_propagated(&store)?;
            let output = cfg.output_path(&output);
            propagate::export_projection(&p, &inventory, &output)?;
            println!("{stage}: {} rows", p.len());
            finish(
                stage,
                json!({ "inventory": inventory_json(&rinv), "store": store }),
                &[&rinv.path, &store, &sidecar],
                &[&output],
                json!({ "rows": p.len() }),
            )
        }
    }
}

fn corpus_name(path: &Path) -> String {
    let name = path.file_name().unwrap_or_default().to_string_lossy();
    name.split('.').next().unwrap_or(&name).to_string()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SweepRow {
    pub cap: usize,
    pub senses_observed: usize,
    pub f1: f64,
}

/// For each cap: keep occurrences with index below the cap, aggregate,
/// merge with `base`, propagate and score informed WSD.
pub fn sweep(
    inv: &SenseInventory,
    occurrences: &VectorStore,
    base: Option<&VectorStore>,
    caps: &[usize],
    fw: &Framework,
    instances: &[evaluate::EvalInstance],
    opts: InformedOptions,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(caps.len());
    for &cap in caps {
        let mut occ = occurrences.clone();
        occ.retain(|id| embed::split_occurrence_id(id).is_some_and(|(_, n)| n < cap));
        let senses = embed::aggregate_occurrences(&occ)?;
        let seed = match base {
            Some(b) => embed::merge(b, &senses)?,
            None => senses,
        };
        let p = propagate::propagate_full(&seed, inv)?;
        let (preds, _) = evaluate::predict_informed(instances, &p, inv, opts);
        let report = evaluate::score(&preds, None, &fw.gold, 1)?;
        rows.push(SweepRow {
            cap,
            senses_observed: seed.len(),
            f1: report.f1,
        });
    }
    Ok(rows)
}
