//! The `scan` command line.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error,
//! 3 training failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::checkpoint::Checkpoint;
use crate::data::{
    self, attach_parses, build_hard_test, default_categories, load_category_mapping,
    load_semeval, merge_datasets, read_jsonl, stratified_dev_split, toy, write_jsonl,
    DatasetBundle, Example, LoadReport, Polarity, PolarityCounts, Schema,
};
use crate::error::{Error, Result};
use crate::eval::{dump_attention, evaluate, predict_sentence, AblationRow, AblationTable, EvalMode};
use crate::model::Variant;
use crate::train::{
    load_embeddings, multi_run, overfit_probe, write_history, MultiRunReport, Prepared,
    TrainConfig,
};
use crate::treebank::{graph_validate, parse_bracketed, tree_to_graph, GraphOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_TRAINING: i32 = 3;

/// Category table shipped for SemEval-2015/2016 restaurant markup.
pub const RESTLARGE_MAPPING: &str = include_str!("../resources/restlarge_mapping.txt");

#[derive(Debug, Parser)]
#[command(name = "scan", version, about = "Aspect-category sentiment analysis over constituency trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clean raw markup, attach parses, split, and write JSONL.
    Preprocess(PreprocessArgs),
    /// Train one or more runs and report test accuracy.
    Train(TrainArgs),
    /// Score a checkpoint on a JSONL split.
    Eval(EvalArgs),
    /// Predict categories and polarities for one parsed sentence.
    Predict(PredictArgs),
    /// Export attention weights of one example as JSON and PNG.
    Visualize(VisualizeArgs),
    /// Train every variant and tabulate mean accuracy.
    Ablate(TrainArgs),
    /// Check that the model can fit the built-in eight-sentence corpus.
    Probe(ProbeArgs),
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    /// Markup flavour: semeval2014, mams or semeval2016.
    #[arg(long)]
    pub schema: Schema,
    /// Dataset name recorded in the metadata.
    #[arg(long)]
    pub name: String,
    /// Raw training file(s); several files are merged, first occurrence wins.
    #[arg(long, required = true)]
    pub train: Vec<PathBuf>,
    /// Raw dev file. Without one, dev is split off the training data.
    #[arg(long)]
    pub dev: Option<PathBuf>,
    #[arg(long, required = true)]
    pub test: Vec<PathBuf>,
    /// Directory holding `train.trees`, `test.trees` (and `dev.trees` with
    /// --dev): one bracketed tree per cleaned sentence, in order.
    #[arg(long)]
    pub trees_dir: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Write the cleaned sentences (one per line) for the external parser
    /// and stop.
    #[arg(long)]
    pub emit_sentences: bool,
    /// Dev split target as pos/neg/neu category counts.
    #[arg(long)]
    pub dev_counts: Option<String>,
    #[arg(long, default_value_t = 42)]
    pub split_seed: u64,
    /// key=value category table for semeval2016 markup (defaults to the
    /// shipped table).
    #[arg(long)]
    pub mapping: Option<PathBuf>,
    #[arg(long)]
    pub keep_preterminals: bool,
}

#[derive(Debug, Args, Default)]
pub struct Overrides {
    /// TOML config; command-line flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dataset: Option<String>,
    #[arg(long)]
    pub variant: Option<Variant>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub keep_preterminals: bool,
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub heads: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub acd_weight: Option<f64>,
    #[arg(long)]
    pub iloss_weight: Option<f64>,
    #[arg(long)]
    pub acsa_weight: Option<f64>,
    #[arg(long)]
    pub l2: Option<f64>,
    #[arg(long)]
    pub patience: Option<usize>,
    #[arg(long)]
    pub max_epochs: Option<usize>,
}

impl Overrides {
    pub fn resolve(&self) -> Result<TrainConfig> {
        let mut c = match &self.config {
            Some(p) => TrainConfig::load(p)?,
            None => TrainConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => {$(
                if let Some(v) = &self.$f {
                    c.$f = v.clone();
                }
            )*};
        }
        set!(
            variant,
            seed,
            runs,
            learning_rate,
            batch_size,
            heads,
            dim,
            acd_weight,
            iloss_weight,
            acsa_weight,
            l2,
            patience,
            max_epochs
        );
        if let Some(d) = &self.dataset {
            c.dataset = d.clone();
        }
        if self.out_dir.is_some() {
            c.out_dir = self.out_dir.clone();
        }
        if self.data_dir.is_some() {
            c.data_dir = self.data_dir.clone();
        }
        if self.embeddings.is_some() {
            c.embeddings = self.embeddings.clone();
        }
        c.keep_preterminals |= self.keep_preterminals;
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// JSONL split to score.
    #[arg(long)]
    pub input: PathBuf,
    /// Score only detected categories as correct (demo mode).
    #[arg(long)]
    pub joint: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Bracketed parse of the sentence.
    #[arg(long, conflicts_with = "parse_file")]
    pub parse: Option<String>,
    /// File whose first non-empty line is the bracketed parse.
    #[arg(long)]
    pub parse_file: Option<PathBuf>,
    /// Also write the attention dump here.
    #[arg(long)]
    pub attention_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VisualizeArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    /// Example id; defaults to the first example.
    #[arg(long)]
    pub id: Option<String>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Pixel size of one heatmap cell; 0 skips the PNG.
    #[arg(long, default_value_t = 16)]
    pub cell: u32,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub overrides: Overrides,
}

/// Dataset metadata written next to the JSONL splits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetMeta {
    pub name: String,
    pub schema: Schema,
    pub categories: Vec<String>,
    pub polarities: Vec<Polarity>,
    pub keep_preterminals: bool,
    pub split_seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitStats {
    pub split: String,
    pub sentences: usize,
    pub counts: PolarityCounts,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub name: String,
    pub splits: Vec<SplitStats>,
    /// Loader report per raw file.
    pub loads: BTreeMap<String, LoadReport>,
}

impl StatsReport {
    /// Plain-text table with one row per split.
    pub fn to_table(&self) -> String {
        let mut s = format!(
            "{:<10} {:>9} {:>6} {:>6} {:>6}\n",
            "split", "sentences", "pos", "neg", "neu"
        );
        for r in &self.splits {
            s += &format!(
                "{:<10} {:>9} {:>6} {:>6} {:>6}\n",
                r.split, r.sentences, r.counts.positive, r.counts.negative, r.counts.neutral
            );
        }
        s
    }
}

/// Dev-split targets for datasets without an official dev file.
pub fn preset_dev_counts(name: &str) -> Option<PolarityCounts> {
    match name.to_ascii_lowercase().as_str() {
        "rest14" => Some(PolarityCounts::new(324, 106, 70)),
        "restlarge" => Some(PolarityCounts::new(646, 242, 110)),
        _ => None,
    }
}

fn parse_counts(s: &str) -> Result<PolarityCounts> {
    let parts: Vec<usize> = s
        .split('/')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Config(format!("expected pos/neg/neu counts, got `{s}`")))?;
    match parts[..] {
        [p, n, u] => Ok(PolarityCounts::new(p, n, u)),
        _ => Err(Error::Config(format!("expected pos/neg/neu counts, got `{s}`"))),
    }
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_trees(dir: &Path, split: &str) -> Result<String> {
    let path = dir.join(format!("{split}.trees"));
    fs::read_to_string(&path).map_err(|e| {
        Error::io(
            &path,
            std::io::Error::new(
                e.kind(),
                format!(
                    "{e}; expected one bracketed constituency tree per line, e.g. \
                     `(S (NP (DT The) (NN food)) (VP (VBD was) (ADJP (JJ good))))`, aligned with \
                     `{split}.sentences.txt` (write it with --emit-sentences)"
                ),
            ),
        )
    })
}

fn load_split(
    paths: &[PathBuf],
    schema: Schema,
    mapping: Option<&BTreeMap<String, String>>,
    loads: &mut BTreeMap<String, LoadReport>,
) -> Result<Vec<Example>> {
    let mut parts = Vec::new();
    for p in paths {
        let loaded = load_semeval(p, schema, mapping)?;
        loads.insert(p.display().to_string(), loaded.report);
        parts.push(loaded.examples);
    }
    Ok(if parts.len() == 1 {
        parts.remove(0)
    } else {
        merge_datasets(&parts)
    })
}

pub fn preprocess(args: &PreprocessArgs) -> Result<StatsReport> {
    let mapping = match (&args.mapping, args.schema) {
        (Some(p), _) => Some(load_category_mapping(
            &fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
        )?),
        (None, Schema::Semeval2016) => Some(load_category_mapping(RESTLARGE_MAPPING)?),
        _ => None,
    };
    let mut loads = BTreeMap::new();
    let mut splits: Vec<(&str, Vec<Example>)> = vec![(
        "train",
        load_split(&args.train, args.schema, mapping.as_ref(), &mut loads)?,
    )];
    if let Some(dev) = &args.dev {
        splits.push(("dev", load_split(std::slice::from_ref(dev), args.schema, mapping.as_ref(), &mut loads)?));
    }
    splits.push(("test", load_split(&args.test, args.schema, mapping.as_ref(), &mut loads)?));
    create_dir(&args.out_dir)?;

    if args.emit_sentences {
        for (name, exs) in &splits {
            let body: String = exs.iter().map(|e| e.text.replace('\n', " ") + "\n").collect();
            write_text(&args.out_dir.join(format!("{name}.sentences.txt")), &body)?;
        }
        return Ok(StatsReport {
            name: args.name.clone(),
            splits: stats_rows(&splits),
            loads,
        });
    }

    let trees_dir = args.trees_dir.as_ref().ok_or_else(|| {
        Error::Config(
            "--trees-dir is required: it must hold <split>.trees files with one bracketed \
             constituency tree per sentence (run with --emit-sentences first to get the sentences)"
                .into(),
        )
    })?;
    let opts = GraphOptions {
        keep_preterminals: args.keep_preterminals,
    };
    for (name, exs) in splits.iter_mut() {
        *exs = attach_parses(exs, &read_trees(trees_dir, name)?)?;
        check_graphs(exs, opts)?;
    }

    let mut split_seed = None;
    if args.dev.is_none() {
        let target = match &args.dev_counts {
            Some(s) => parse_counts(s)?,
            None => preset_dev_counts(&args.name).ok_or_else(|| {
                Error::Config(format!(
                    "no dev file and no preset for `{}`: pass --dev-counts pos/neg/neu",
                    args.name
                ))
            })?,
        };
        let (train, dev) = stratified_dev_split(&splits[0].1, target, args.split_seed);
        splits[0].1 = train;
        splits.insert(1, ("dev", dev));
        split_seed = Some(args.split_seed);
    }
    let hard = build_hard_test(&splits[2].1);
    splits.push(("test_hard", hard));

    for (name, exs) in &splits {
        write_jsonl(&args.out_dir.join(format!("{name}.jsonl")), exs)?;
    }
    let meta = DatasetMeta {
        name: args.name.clone(),
        schema: args.schema,
        categories: default_categories(args.schema),
        polarities: Polarity::ALL.to_vec(),
        keep_preterminals: args.keep_preterminals,
        split_seed,
    };
    write_text(
        &args.out_dir.join("meta.json"),
        &(serde_json::to_string_pretty(&meta)? + "\n"),
    )?;
    let report = StatsReport {
        name: args.name.clone(),
        splits: stats_rows(&splits),
        loads,
    };
    write_text(
        &args.out_dir.join("stats.json"),
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;
    write_text(&args.out_dir.join("stats.txt"), &report.to_table())?;
    Ok(report)
}

fn stats_rows(splits: &[(&str, Vec<Example>)]) -> Vec<SplitStats> {
    splits
        .iter()
        .map(|(name, exs)| SplitStats {
            split: name.to_string(),
            sentences: exs.len(),
            counts: PolarityCounts::of(exs),
        })
        .collect()
}

fn check_graphs(examples: &[Example], opts: GraphOptions) -> Result<()> {
    for e in examples {
        let tree = parse_bracketed(&e.parse)?;
        let graph = tree_to_graph(&tree, opts)?;
        let v = graph_validate(&graph, &tree, opts);
        if let Some(first) = v.first() {
            return Err(Error::Precondition(format!(
                "example {}: {} graph violations, first: {}",
                e.id,
                v.len(),
                first.message
            )));
        }
    }
    Ok(())
}

/// A preprocessed dataset directory.
pub struct DatasetDir {
    pub meta: DatasetMeta,
    pub bundle: DatasetBundle,
    pub hard: Option<Vec<Example>>,
}

pub fn read_dataset_dir(dir: &Path) -> Result<DatasetDir> {
    let meta_path = dir.join("meta.json");
    let meta: DatasetMeta = serde_json::from_str(
        &fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?,
    )?;
    let hard_path = dir.join("test_hard.jsonl");
    let hard = if hard_path.exists() {
        Some(read_jsonl(&hard_path)?)
    } else {
        None
    };
    let bundle = DatasetBundle {
        name: meta.name.clone(),
        train: read_jsonl(&dir.join("train.jsonl"))?,
        dev: read_jsonl(&dir.join("dev.jsonl"))?,
        test: read_jsonl(&dir.join("test.jsonl"))?,
        categories: meta.categories.clone(),
        polarities: meta.polarities.clone(),
    };
    bundle.validate()?;
    Ok(DatasetDir { meta, bundle, hard })
}

fn prepared_from(cfg: &TrainConfig) -> Result<Prepared> {
    let dir = cfg.data_dir.as_ref().ok_or_else(|| {
        Error::Config("no dataset directory: pass --data-dir or set data_dir in the config".into())
    })?;
    let ds = read_dataset_dir(dir)?;
    let extra: Vec<(String, Vec<Example>)> = ds
        .hard
        .into_iter()
        .filter(|h| !h.is_empty())
        .map(|h| ("test_hard".to_string(), h))
        .collect();
    Prepared::new(&ds.bundle, &extra, cfg.graph_options())
}

fn out_dir(cfg: &TrainConfig) -> Result<PathBuf> {
    let dir = cfg
        .out_dir
        .clone()
        .ok_or_else(|| Error::Config("pass --out-dir or set out_dir in the config".into()))?;
    create_dir(&dir)?;
    Ok(dir)
}

fn snapshot(cfg: &TrainConfig, dir: &Path) -> Result<()> {
    write_text(&dir.join("config.resolved.toml"), &cfg.to_toml())
}

fn train_variant(cfg: &TrainConfig, prepared: &Prepared, dir: &Path) -> Result<MultiRunReport> {
    let pretrained = load_embeddings(cfg, prepared)?;
    let report = multi_run(cfg, prepared, pretrained.as_ref().map(|p| &p.0), |i, run| {
        let run_dir = dir.join(format!("run-{i}"));
        create_dir(&run_dir)?;
        write_history(&run_dir.join("history.jsonl"), &run.history)?;
        Checkpoint {
            model: run.best.clone(),
            variant: cfg.variant,
            keep_preterminals: cfg.keep_preterminals,
            vocab: prepared.vocab.clone(),
            categories: prepared.categories.clone(),
        }
        .save(&run_dir.join("model.ckpt"))
    })?;
    write_text(
        &dir.join("report.json"),
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;
    Ok(report)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn partial_failure(what: &str, failures: &[String]) -> Error {
    Error::Divergence {
        epoch: 0,
        message: format!("{what}: {} run(s) failed: {}", failures.len(), failures.join("; ")),
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Preprocess(a) => {
            let report = preprocess(&a)?;
            print!("{}", report.to_table());
        }
        Command::Train(a) => {
            let cfg = a.overrides.resolve()?;
            let dir = out_dir(&cfg)?;
            snapshot(&cfg, &dir)?;
            let prepared = prepared_from(&cfg)?;
            let report = train_variant(&cfg, &prepared, &dir)?;
            print_json(&report.aggregates)?;
            if report.partial {
                return Err(partial_failure("train", &report.failures));
            }
        }
        Command::Ablate(a) => {
            let base = a.overrides.resolve()?;
            let dir = out_dir(&base)?;
            snapshot(&base, &dir)?;
            let prepared = prepared_from(&base)?;
            let mut table = AblationTable::default();
            let mut failures = Vec::new();
            for variant in Variant::ALL {
                let cfg = TrainConfig {
                    variant,
                    ..base.clone()
                };
                let vdir = dir.join(variant.as_str());
                create_dir(&vdir)?;
                let report = train_variant(&cfg, &prepared, &vdir)?;
                failures.extend(report.failures.iter().cloned());
                for (split, agg) in &report.aggregates {
                    table.rows.push(AblationRow {
                        dataset: prepared.name.clone(),
                        variant,
                        split: split.clone(),
                        mean: 100.0 * agg.mean,
                        std: 100.0 * agg.std,
                        runs: agg.runs,
                        partial: report.partial,
                    });
                }
            }
            write_text(&dir.join("ablation.csv"), &table.to_csv())?;
            write_text(&dir.join("ablation.json"), &(table.to_json() + "\n"))?;
            print!("{}", table.to_csv());
            if !failures.is_empty() {
                return Err(partial_failure("ablate", &failures));
            }
        }
        Command::Eval(a) => {
            let ck = Checkpoint::load(&a.checkpoint)?;
            let exs = read_jsonl(&a.input)?;
            let opts = GraphOptions {
                keep_preterminals: ck.keep_preterminals,
            };
            let enc = data::encode_examples(&exs, &ck.vocab, &ck.categories, opts)?;
            let mode = if a.joint { EvalMode::Joint } else { EvalMode::Gold };
            let report = evaluate(&ck.model, &enc, ck.variant, mode, 32)?;
            if let Some(out) = &a.out {
                write_text(out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            }
            print_json(&report)?;
        }
        Command::Predict(a) => {
            let ck = Checkpoint::load(&a.checkpoint)?;
            let parse = match (&a.parse, &a.parse_file) {
                (Some(p), _) => p.clone(),
                (None, Some(f)) => fs::read_to_string(f)
                    .map_err(|e| Error::io(f, e))?
                    .lines()
                    .find(|l| !l.trim().is_empty())
                    .ok_or_else(|| Error::Format {
                        line: 1,
                        message: "parse file is empty".into(),
                    })?
                    .to_string(),
                (None, None) => {
                    return Err(Error::Config("pass --parse or --parse-file".into()))
                }
            };
            let opts = GraphOptions {
                keep_preterminals: ck.keep_preterminals,
            };
            let pred = predict_sentence(&ck.model, &ck.vocab, &ck.categories, &parse, ck.variant, opts)?;
            if let Some(out) = &a.attention_out {
                pred.attention.write(out)?;
            }
            print_json(&pred.labels)?;
        }
        Command::Visualize(a) => {
            let ck = Checkpoint::load(&a.checkpoint)?;
            let exs = read_jsonl(&a.input)?;
            let ex = match &a.id {
                Some(id) => exs.iter().find(|e| &e.id == id).ok_or_else(|| {
                    Error::Precondition(format!("no example with id `{id}` in {}", a.input.display()))
                })?,
                None => exs.first().ok_or_else(|| {
                    Error::Precondition(format!("{} is empty", a.input.display()))
                })?,
            };
            let opts = GraphOptions {
                keep_preterminals: ck.keep_preterminals,
            };
            let dump = dump_attention(&ck.model, &ck.vocab, &ck.categories, ex, ck.variant, opts)?;
            create_dir(&a.out_dir)?;
            let stem = sanitize(&ex.id);
            dump.write(&a.out_dir.join(format!("{stem}.attention.json")))?;
            if a.cell > 0 {
                dump.render_heatmap(&a.out_dir.join(format!("{stem}.beta.png")), a.cell)?;
            }
            println!("{}", a.out_dir.join(format!("{stem}.attention.json")).display());
        }
        Command::Probe(a) => {
            let cfg = a.overrides.resolve()?;
            let result = overfit_probe(&cfg, &toy::corpus())?;
            if let Some(dir) = &cfg.out_dir {
                create_dir(dir)?;
                snapshot(&cfg, dir)?;
            }
            print_json(&result)?;
            if !result.passed {
                return Err(Error::Divergence {
                    epoch: result.epochs,
                    message: format!(
                        "train accuracy {:.3} after {} epochs",
                        result.train_accuracy, result.epochs
                    ),
                });
            }
        }
    }
    Ok(())
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) => EXIT_USAGE,
        Error::Divergence { .. } => EXIT_TRAINING,
        _ => EXIT_DATA,
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
