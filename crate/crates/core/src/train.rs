//! Optimization: configuration, Adam, early stopping, single and repeated
//! runs, and the overfitting probe.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::{
    batchify, build_vocab, encode_examples, load_pretrained_embeddings, Coverage, DatasetBundle,
    EncodedExample, Vocab,
};
use crate::error::{Error, Result};
use crate::eval::{aggregate, evaluate, Aggregate, EvalMode};
use crate::model::{LossWeights, ModelConfig, ModelParams, Scan, Variant};
use crate::treebank::GraphOptions;

/// Training hyperparameters and paths. Every field has a default, so a
/// config file only needs the keys it changes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    /// GAT heads `L`.
    pub heads: usize,
    /// Embedding and hidden size `d`.
    pub dim: usize,
    /// Loss weights: detection (epsilon), interactive (eta), sentiment (mu).
    pub acd_weight: f64,
    pub iloss_weight: f64,
    pub acsa_weight: f64,
    /// L2 coefficient (lambda).
    pub l2: f64,
    pub patience: usize,
    pub runs: usize,
    pub max_epochs: usize,
    pub seed: u64,
    pub variant: Variant,
    pub dataset: String,
    pub keep_preterminals: bool,
    pub leaky_slope: f64,
    /// Directory with `train.jsonl`, `dev.jsonl`, `test.jsonl` and optionally
    /// `test_hard.jsonl`.
    pub data_dir: Option<PathBuf>,
    /// GloVe-format text file; random embeddings when absent.
    pub embeddings: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.001,
            batch_size: 32,
            heads: 4,
            dim: 300,
            acd_weight: 1.0,
            iloss_weight: 1.0,
            acsa_weight: 1.0,
            l2: 1e-5,
            patience: 10,
            runs: 5,
            max_epochs: 100,
            seed: 42,
            variant: Variant::Full,
            dataset: String::new(),
            keep_preterminals: false,
            leaky_slope: 0.2,
            data_dir: None,
            embeddings: None,
            out_dir: None,
        }
    }
}

impl TrainConfig {
    pub fn from_toml(text: &str) -> Result<TrainConfig> {
        let cfg: TrainConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<TrainConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        TrainConfig::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let weights = [self.acd_weight, self.iloss_weight, self.acsa_weight, self.l2];
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Config("loss weights must be finite and non-negative".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return Err(Error::Config("learning_rate must be finite and non-negative".into()));
        }
        if self.patience == 0 || self.runs == 0 || self.batch_size == 0 || self.max_epochs == 0 {
            return Err(Error::Config(
                "patience, runs, batch_size and max_epochs must be at least 1".into(),
            ));
        }
        if self.heads == 0 || !self.dim.is_multiple_of(self.heads) {
            return Err(Error::Config(format!(
                "dim ({}) must be a positive multiple of heads ({})",
                self.dim, self.heads
            )));
        }
        Ok(())
    }

    /// Loss weights after the variant's adjustment.
    pub fn loss_weights(&self) -> LossWeights {
        self.variant.adjust_weights(LossWeights {
            acd: self.acd_weight,
            iloss: self.iloss_weight,
            acsa: self.acsa_weight,
            l2: self.l2,
        })
    }

    pub fn graph_options(&self) -> GraphOptions {
        GraphOptions {
            keep_preterminals: self.keep_preterminals,
        }
    }

    pub fn model_config(&self, vocab_size: usize, num_categories: usize) -> ModelConfig {
        ModelConfig {
            vocab_size,
            dim: self.dim,
            heads: self.heads,
            num_categories,
            num_polarities: 3,
            leaky_slope: self.leaky_slope,
        }
    }
}

/// Adam with bias correction.
#[derive(Clone, Debug)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    m: ModelParams,
    v: ModelParams,
    t: i32,
}

impl Adam {
    pub fn new(params: &ModelParams, lr: f64) -> Adam {
        Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            m: params.zeros_like(),
            v: params.zeros_like(),
            t: 0,
        }
    }

    pub fn step(&mut self, params: &mut ModelParams, grad: &ModelParams) {
        self.t += 1;
        let (b1, b2) = (self.beta1, self.beta2);
        let c1 = 1.0 - b1.powi(self.t);
        let c2 = 1.0 - b2.powi(self.t);
        let groups = params
            .tensors_mut()
            .into_iter()
            .zip(grad.tensors())
            .zip(self.m.tensors_mut().into_iter().zip(self.v.tensors_mut()));
        for (((_, p), (_, g)), ((_, m), (_, v))) in groups {
            for i in 0..p.len() {
                m[i] = b1 * m[i] + (1.0 - b1) * g[i];
                v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
                p[i] -= self.lr * (m[i] / c1) / ((v[i] / c2).sqrt() + self.eps);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopDecision {
    Improved,
    Continue,
    Stop,
}

/// Patience-based stopping on a metric where larger is better.
#[derive(Clone, Debug)]
pub struct EarlyStopping {
    patience: usize,
    best: Option<f64>,
    best_epoch: usize,
    stale: usize,
}

impl EarlyStopping {
    pub fn new(patience: usize) -> Self {
        EarlyStopping {
            patience,
            best: None,
            best_epoch: 0,
            stale: 0,
        }
    }

    /// Records the metric of `epoch` (1-based). A strict improvement resets
    /// the counter; `patience` consecutive non-improving epochs stop.
    pub fn observe(&mut self, epoch: usize, metric: f64) -> StopDecision {
        if self.best.is_none_or(|b| metric > b) {
            self.best = Some(metric);
            self.best_epoch = epoch;
            self.stale = 0;
            return StopDecision::Improved;
        }
        self.stale += 1;
        if self.stale >= self.patience {
            StopDecision::Stop
        } else {
            StopDecision::Continue
        }
    }

    pub fn best(&self) -> Option<f64> {
        self.best
    }

    pub fn best_epoch(&self) -> usize {
        self.best_epoch
    }
}

/// One line of the training history.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Mean over batches of the total objective.
    pub train_loss: f64,
    pub train_acd: f64,
    pub train_iloss: f64,
    pub train_acsa: f64,
    pub dev_accuracy: f64,
    pub improved: bool,
}

pub fn write_history(path: &Path, history: &[EpochRecord]) -> Result<()> {
    let mut s = String::new();
    for r in history {
        s.push_str(&serde_json::to_string(r)?);
        s.push('\n');
    }
    std::fs::write(path, s).map_err(|e| Error::io(path, e))
}

#[derive(Clone, Debug)]
pub struct RunResult {
    /// Parameters of the best dev epoch.
    pub best: Scan,
    pub best_epoch: usize,
    pub best_dev: f64,
    pub history: Vec<EpochRecord>,
}

/// Encoded splits plus the vocabulary they were encoded with.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub name: String,
    pub vocab: Vocab,
    pub categories: Vec<String>,
    pub train: Vec<EncodedExample>,
    pub dev: Vec<EncodedExample>,
    /// Named evaluation splits, e.g. `test` and `test_hard`.
    pub eval_sets: Vec<(String, Vec<EncodedExample>)>,
    pub opts: GraphOptions,
}

impl Prepared {
    /// Builds the vocabulary from the training split and encodes every split.
    /// `extra` adds further named evaluation splits after `test`.
    pub fn new(
        bundle: &DatasetBundle,
        extra: &[(String, Vec<crate::data::Example>)],
        opts: GraphOptions,
    ) -> Result<Prepared> {
        bundle.validate()?;
        let vocab = build_vocab(&bundle.train, 1);
        let enc = |exs: &[crate::data::Example]| encode_examples(exs, &vocab, &bundle.categories, opts);
        let mut eval_sets = vec![("test".to_string(), enc(&bundle.test)?)];
        for (name, exs) in extra {
            eval_sets.push((name.clone(), enc(exs)?));
        }
        Ok(Prepared {
            name: bundle.name.clone(),
            train: enc(&bundle.train)?,
            dev: enc(&bundle.dev)?,
            vocab,
            categories: bundle.categories.clone(),
            eval_sets,
            opts,
        })
    }
}

/// Initial parameters for a run: seeded random init, with the embedding
/// matrix replaced when pretrained vectors are supplied.
pub fn init_model(
    cfg: &TrainConfig,
    prepared: &Prepared,
    pretrained: Option<&ndarray::Array2<f64>>,
    seed: u64,
) -> Result<Scan> {
    let mc = cfg.model_config(prepared.vocab.len(), prepared.categories.len());
    let mut model = Scan::new(mc, seed)?;
    if let Some(emb) = pretrained {
        if emb.dim() != model.params.embedding.dim() {
            return Err(Error::Shape(format!(
                "pretrained embeddings are {:?}, model expects {:?}",
                emb.dim(),
                model.params.embedding.dim()
            )));
        }
        model.params.embedding.assign(emb);
    }
    Ok(model)
}

/// Loads the configured embedding file for `prepared`'s vocabulary.
pub fn load_embeddings(
    cfg: &TrainConfig,
    prepared: &Prepared,
) -> Result<Option<(ndarray::Array2<f64>, Coverage)>> {
    match &cfg.embeddings {
        Some(path) => {
            let (m, cov) = load_pretrained_embeddings(&prepared.vocab, path, cfg.dim, cfg.seed)?;
            log::info!(
                "embedding coverage {}/{} ({:.1}%)",
                cov.covered,
                cov.total,
                100.0 * cov.fraction()
            );
            Ok(Some((m, cov)))
        }
        None => Ok(None),
    }
}

/// Trains from `init` with Adam until dev sentiment accuracy stops improving
/// for `patience` epochs or `max_epochs` is reached. `on_epoch` sees every
/// history record as it is produced.
pub fn train_one_run(
    cfg: &TrainConfig,
    train: &[EncodedExample],
    dev: &[EncodedExample],
    init: Scan,
    seed: u64,
    mut on_epoch: impl FnMut(&EpochRecord),
) -> Result<RunResult> {
    cfg.validate()?;
    if train.is_empty() || dev.is_empty() {
        return Err(Error::Precondition("training and dev splits must be non-empty".into()));
    }
    let weights = cfg.loss_weights();
    let mut model = init;
    let mut adam = Adam::new(&model.params, cfg.learning_rate);
    let mut stopper = EarlyStopping::new(cfg.patience);
    let mut best = model.clone();
    let mut history = Vec::new();

    for epoch in 1..=cfg.max_epochs {
        let batches = batchify(train, cfg.batch_size, Some(seed.wrapping_add(epoch as u64)))?;
        let mut sums = [0.0; 4];
        for batch in &batches {
            let (lb, grad) = model.loss_and_grad(batch, &weights, cfg.variant)?;
            if !lb.total.is_finite() || !grad.all_finite() {
                return Err(Error::Divergence {
                    epoch,
                    message: format!(
                        "non-finite loss (acd {}, iloss {}, acsa {}, l2 {})",
                        lb.acd, lb.iloss, lb.acsa, lb.l2
                    ),
                });
            }
            for (s, v) in sums.iter_mut().zip([lb.total, lb.acd, lb.iloss, lb.acsa]) {
                *s += v;
            }
            adam.step(&mut model.params, &grad);
        }
        let nb = batches.len() as f64;
        let dev_acc = evaluate(&model, dev, cfg.variant, EvalMode::Gold, cfg.batch_size)?.accuracy;
        let decision = stopper.observe(epoch, dev_acc);
        if decision == StopDecision::Improved {
            best = model.clone();
        }
        let rec = EpochRecord {
            epoch,
            train_loss: sums[0] / nb,
            train_acd: sums[1] / nb,
            train_iloss: sums[2] / nb,
            train_acsa: sums[3] / nb,
            dev_accuracy: dev_acc,
            improved: decision == StopDecision::Improved,
        };
        log::info!(
            "epoch {epoch}: loss {:.4}, dev acc {:.4}{}",
            rec.train_loss,
            dev_acc,
            if rec.improved { " *" } else { "" }
        );
        on_epoch(&rec);
        history.push(rec);
        if decision == StopDecision::Stop {
            break;
        }
    }
    Ok(RunResult {
        best,
        best_epoch: stopper.best_epoch(),
        best_dev: stopper.best().unwrap_or(0.0),
        history,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run: usize,
    pub seed: u64,
    pub best_epoch: usize,
    pub epochs: usize,
    pub dev_accuracy: f64,
    /// Accuracy per evaluation split.
    pub accuracy: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiRunReport {
    pub variant: Variant,
    pub runs: Vec<RunSummary>,
    pub failures: Vec<String>,
    /// Mean and deviation per evaluation split over the successful runs.
    pub aggregates: BTreeMap<String, Aggregate>,
    /// True when at least one run failed.
    pub partial: bool,
}

/// Runs `cfg.runs` independent trainings with seeds `cfg.seed + i` and
/// aggregates test accuracy per evaluation split. A failed run is recorded
/// and skipped; the report is flagged partial. `on_run` receives each
/// successful run, e.g. to save its checkpoint.
pub fn multi_run(
    cfg: &TrainConfig,
    prepared: &Prepared,
    pretrained: Option<&ndarray::Array2<f64>>,
    mut on_run: impl FnMut(usize, &RunResult) -> Result<()>,
) -> Result<MultiRunReport> {
    cfg.validate()?;
    let mut report = MultiRunReport {
        variant: cfg.variant,
        runs: Vec::new(),
        failures: Vec::new(),
        aggregates: BTreeMap::new(),
        partial: false,
    };
    for run in 0..cfg.runs {
        let seed = cfg.seed.wrapping_add(run as u64);
        let outcome = init_model(cfg, prepared, pretrained, seed).and_then(|init| {
            train_one_run(cfg, &prepared.train, &prepared.dev, init, seed, |_| {})
        });
        let result = match outcome {
            Ok(r) => r,
            Err(e) => {
                log::error!("run {run} (seed {seed}) failed: {e}");
                report.failures.push(format!("run {run} (seed {seed}): {e}"));
                continue;
            }
        };
        let mut accuracy = BTreeMap::new();
        for (name, exs) in &prepared.eval_sets {
            if exs.is_empty() {
                continue;
            }
            let r = evaluate(&result.best, exs, cfg.variant, EvalMode::Gold, cfg.batch_size)?;
            accuracy.insert(name.clone(), r.accuracy);
        }
        on_run(run, &result)?;
        report.runs.push(RunSummary {
            run,
            seed,
            best_epoch: result.best_epoch,
            epochs: result.history.len(),
            dev_accuracy: result.best_dev,
            accuracy,
        });
    }
    if report.runs.is_empty() {
        return Err(Error::Divergence {
            epoch: 0,
            message: format!("all {} runs failed: {}", cfg.runs, report.failures.join("; ")),
        });
    }
    report.partial = !report.failures.is_empty();
    for (name, _) in &prepared.eval_sets {
        let vals: Vec<f64> = report
            .runs
            .iter()
            .filter_map(|r| r.accuracy.get(name).copied())
            .collect();
        if let Some(a) = aggregate(&vals) {
            report.aggregates.insert(name.clone(), a);
        }
    }
    Ok(report)
}

/// Outcome of [`overfit_probe`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub passed: bool,
    /// Epochs trained before reaching 100% or giving up.
    pub epochs: usize,
    pub train_accuracy: f64,
    pub seconds: f64,
}

pub const PROBE_MAX_EPOCHS: usize = 300;
pub const PROBE_MAX_EXAMPLES: usize = 10;

/// Trains on a tiny corpus and checks that sentiment accuracy on that same
/// corpus reaches 100% within [`PROBE_MAX_EPOCHS`] epochs. Early stopping is
/// not applied.
pub fn overfit_probe(cfg: &TrainConfig, corpus: &DatasetBundle) -> Result<ProbeResult> {
    if corpus.train.len() > PROBE_MAX_EXAMPLES {
        return Err(Error::Precondition(format!(
            "the probe takes at most {PROBE_MAX_EXAMPLES} examples, got {}",
            corpus.train.len()
        )));
    }
    cfg.validate()?;
    let start = Instant::now();
    let prepared = Prepared::new(corpus, &[], cfg.graph_options())?;
    let mut model = init_model(cfg, &prepared, None, cfg.seed)?;
    let weights = cfg.loss_weights();
    let mut adam = Adam::new(&model.params, cfg.learning_rate);
    let mut acc = 0.0;
    for epoch in 1..=PROBE_MAX_EPOCHS {
        let batches = batchify(&prepared.train, cfg.batch_size, Some(cfg.seed.wrapping_add(epoch as u64)))?;
        for batch in &batches {
            let (lb, grad) = model.loss_and_grad(batch, &weights, cfg.variant)?;
            if !lb.total.is_finite() {
                break;
            }
            adam.step(&mut model.params, &grad);
        }
        acc = evaluate(&model, &prepared.train, cfg.variant, EvalMode::Gold, cfg.batch_size)?.accuracy;
        if acc == 1.0 {
            return Ok(ProbeResult {
                passed: true,
                epochs: epoch,
                train_accuracy: acc,
                seconds: start.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(ProbeResult {
        passed: false,
        epochs: PROBE_MAX_EPOCHS,
        train_accuracy: acc,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::toy;

    #[test]
    fn patience_example() {
        let mut s = EarlyStopping::new(10);
        let mut stopped = None;
        for epoch in 1..=100 {
            let metric = match epoch {
                1 => 0.5,
                2 => 0.6,
                5 => 0.7,
                _ => 0.65,
            };
            if s.observe(epoch, metric) == StopDecision::Stop {
                stopped = Some(epoch);
                break;
            }
        }
        assert_eq!(stopped, Some(15));
        assert_eq!(s.best_epoch(), 5);
    }

    #[test]
    fn ties_do_not_count_as_improvement() {
        let mut s = EarlyStopping::new(2);
        assert_eq!(s.observe(1, 0.5), StopDecision::Improved);
        assert_eq!(s.observe(2, 0.5), StopDecision::Continue);
        assert_eq!(s.observe(3, 0.5), StopDecision::Stop);
    }

    #[test]
    fn config_defaults_and_overrides() {
        let c = TrainConfig::default();
        assert_eq!(
            (c.learning_rate, c.batch_size, c.heads, c.patience, c.runs, c.max_epochs),
            (0.001, 32, 4, 10, 5, 100)
        );
        assert_eq!(c.loss_weights(), LossWeights::default());
        let c = TrainConfig::from_toml("learning_rate = 0.01\nvariant = \"no_tree\"\n").unwrap();
        assert_eq!(c.learning_rate, 0.01);
        assert_eq!(c.variant, Variant::NoTree);
        assert_eq!(TrainConfig::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn unknown_and_invalid_keys_are_rejected() {
        assert!(TrainConfig::from_toml("learning_rat = 0.1").is_err());
        assert!(TrainConfig::from_toml("patience = 0").is_err());
        assert!(TrainConfig::from_toml("iloss_weight = -1.0").is_err());
        assert!(TrainConfig::from_toml("dim = 10\nheads = 4").is_err());
    }

    #[test]
    fn no_iloss_zeroes_only_eta() {
        let c = TrainConfig {
            variant: Variant::NoIloss,
            ..TrainConfig::default()
        };
        let w = c.loss_weights();
        assert_eq!((w.acd, w.iloss, w.acsa, w.l2), (1.0, 0.0, 1.0, 1e-5));
    }

    #[test]
    fn adam_first_step_moves_by_lr() {
        let cfg = TrainConfig {
            dim: 4,
            heads: 2,
            ..TrainConfig::default()
        };
        let mc = cfg.model_config(5, 2);
        let mut p = ModelParams::zeros(&mc);
        let mut g = p.zeros_like();
        g.fill(3.0);
        let mut adam = Adam::new(&p, 0.1);
        adam.step(&mut p, &g);
        for (_, t) in p.tensors() {
            for &x in t {
                assert!((x + 0.1).abs() < 1e-8);
            }
        }
    }

    fn small_cfg() -> TrainConfig {
        TrainConfig {
            dim: 16,
            heads: 4,
            learning_rate: 0.01,
            batch_size: 8,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn loss_decreases_on_a_fixed_batch() {
        let cfg = small_cfg();
        let prepared = Prepared::new(&toy::corpus(), &[], cfg.graph_options()).unwrap();
        let mut model = init_model(&cfg, &prepared, None, 3).unwrap();
        let batch = batchify(&prepared.train, 8, None).unwrap().remove(0);
        let w = cfg.loss_weights();
        let mut adam = Adam::new(&model.params, cfg.learning_rate);
        let mut losses = Vec::new();
        for _ in 0..10 {
            let (lb, g) = model.loss_and_grad(&batch, &w, cfg.variant).unwrap();
            losses.push(lb.total);
            adam.step(&mut model.params, &g);
        }
        assert!(losses.windows(2).all(|w| w[1] < w[0]), "{losses:?}");
    }

    #[test]
    fn run_respects_max_epochs_and_is_reproducible() {
        let cfg = TrainConfig {
            max_epochs: 4,
            patience: 2,
            ..small_cfg()
        };
        let prepared = Prepared::new(&toy::corpus(), &[], cfg.graph_options()).unwrap();
        let go = || {
            let init = init_model(&cfg, &prepared, None, 5).unwrap();
            train_one_run(&cfg, &prepared.train, &prepared.dev, init, 5, |_| {}).unwrap()
        };
        let (a, b) = (go(), go());
        assert!(a.history.len() <= 4);
        assert_eq!(a.history, b.history);
        assert_eq!(a.best, b.best);
        for (i, r) in a.history.iter().enumerate() {
            assert_eq!(r.epoch, i + 1);
        }
    }

    #[test]
    fn divergence_is_reported() {
        let cfg = TrainConfig {
            max_epochs: 2,
            ..small_cfg()
        };
        let prepared = Prepared::new(&toy::corpus(), &[], cfg.graph_options()).unwrap();
        let mut init = init_model(&cfg, &prepared, None, 5).unwrap();
        init.params.acsa.w1[[0, 0]] = f64::NAN;
        let err = train_one_run(&cfg, &prepared.train, &prepared.dev, init, 5, |_| {}).unwrap_err();
        assert!(matches!(err, Error::Divergence { epoch: 1, .. }), "{err}");
    }

    #[test]
    fn multi_run_uses_consecutive_seeds() {
        let cfg = TrainConfig {
            max_epochs: 1,
            runs: 2,
            seed: 10,
            ..small_cfg()
        };
        let prepared = Prepared::new(&toy::corpus(), &[], cfg.graph_options()).unwrap();
        let mut seen = Vec::new();
        let report = multi_run(&cfg, &prepared, None, |i, _| {
            seen.push(i);
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, [0, 1]);
        assert_eq!(report.runs.iter().map(|r| r.seed).collect::<Vec<_>>(), [10, 11]);
        let agg = report.aggregates["test"];
        let accs: Vec<f64> = report.runs.iter().map(|r| r.accuracy["test"]).collect();
        assert!((agg.mean - (accs[0] + accs[1]) / 2.0).abs() < 1e-15);
        assert!(!report.partial);
    }

    #[test]
    fn probe_fails_without_learning() {
        let cfg = TrainConfig {
            learning_rate: 0.0,
            ..small_cfg()
        };
        let r = overfit_probe(&cfg, &toy::corpus()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.epochs, PROBE_MAX_EPOCHS);
    }
}
