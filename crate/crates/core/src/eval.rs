//! Accuracy, detection metrics, prediction, attention export and the
//! ablation table.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Axis;
use serde::{Deserialize, Serialize};

use crate::data::{batchify, EncodedExample, Example, Label, Polarity, Vocab};
use crate::error::{Error, Result};
use crate::model::{ModelOutput, NodeAlphas, Scan, Variant};
use crate::treebank::{parse_bracketed, tree_to_graph, ConstituencyGraph, GraphOptions};

/// Detection threshold on the diagonal of the ACD output.
pub const ACD_THRESHOLD: f64 = 0.5;

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(dist: &[f64]) -> usize {
    let mut best = 0;
    for (i, &p) in dist.iter().enumerate() {
        if p > dist[best] {
            best = i;
        }
    }
    best
}

/// Fraction of mentioned (sentence, category) pairs whose predicted
/// polarity equals the gold one. `gold[s][j]` is `None` for categories the
/// sentence does not mention; `predictions[s][j]` is ignored there.
pub fn accuracy(predictions: &[Vec<usize>], gold: &[Vec<Option<usize>>]) -> Result<f64> {
    if predictions.len() != gold.len() {
        return Err(Error::Shape(format!(
            "{} prediction rows for {} gold rows",
            predictions.len(),
            gold.len()
        )));
    }
    let (mut correct, mut total) = (0usize, 0usize);
    for (p, g) in predictions.iter().zip(gold) {
        if p.len() != g.len() {
            return Err(Error::Shape("prediction and gold widths differ".into()));
        }
        for (&pi, gi) in p.iter().zip(g) {
            if let Some(gi) = gi {
                total += 1;
                correct += usize::from(pi == *gi);
            }
        }
    }
    if total == 0 {
        return Err(Error::Precondition("accuracy over an empty gold set".into()));
    }
    Ok(correct as f64 / total as f64)
}

/// Binary detection metrics. A ratio with a zero denominator is reported as
/// 0 and flagged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AcdMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
    pub f1_undefined: bool,
}

/// `scores[k]` is the diagonal probability of pair `k`, `gold[k]` its 0/1
/// label.
pub fn acd_metrics(scores: &[f64], gold: &[f64], threshold: f64) -> AcdMetrics {
    let mut m = AcdMetrics::default();
    for (&s, &g) in scores.iter().zip(gold) {
        match (s >= threshold, g >= 0.5) {
            (true, true) => m.true_positives += 1,
            (true, false) => m.false_positives += 1,
            (false, true) => m.false_negatives += 1,
            (false, false) => {}
        }
    }
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            (0.0, true)
        } else {
            (num as f64 / den as f64, false)
        }
    };
    let tp = m.true_positives;
    (m.precision, m.precision_undefined) = ratio(tp, tp + m.false_positives);
    (m.recall, m.recall_undefined) = ratio(tp, tp + m.false_negatives);
    let sum = m.precision + m.recall;
    if m.precision_undefined || m.recall_undefined || sum == 0.0 {
        m.f1_undefined = true;
    } else {
        m.f1 = 2.0 * m.precision * m.recall / sum;
    }
    m
}

/// How sentiment is scored at evaluation time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    /// Gold categories are given; every mentioned category is scored.
    #[default]
    Gold,
    /// A gold pair only counts as correct if its category is also detected.
    Joint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub correct: usize,
    pub total: usize,
    pub acd: AcdMetrics,
}

/// Per-sentence predictions for a list of encoded examples.
pub struct Predictions {
    /// Argmax polarity per category.
    pub polarity: Vec<Vec<usize>>,
    /// Diagonal detection probability per category.
    pub detection: Vec<Vec<f64>>,
    pub gold: Vec<Vec<Option<usize>>>,
}

pub fn predict_encoded(
    model: &Scan,
    examples: &[EncodedExample],
    variant: Variant,
    batch_size: usize,
) -> Result<Predictions> {
    let mut p = Predictions {
        polarity: Vec::with_capacity(examples.len()),
        detection: Vec::with_capacity(examples.len()),
        gold: Vec::with_capacity(examples.len()),
    };
    for batch in batchify(examples, batch_size, None)? {
        let out = model.forward(&batch, variant)?;
        for b in 0..batch.len() {
            let y_acd = out.y_hat_acd.index_axis(Axis(0), b);
            let y_acsa = out.y_hat_acsa.index_axis(Axis(0), b);
            p.detection.push(y_acd.diag().to_vec());
            p.polarity
                .push(y_acsa.rows().into_iter().map(|r| argmax(&r.to_vec())).collect());
            p.gold.push(batch.gold_sentiment(b));
        }
    }
    Ok(p)
}

/// Sentiment accuracy and detection metrics over `examples`.
pub fn evaluate(
    model: &Scan,
    examples: &[EncodedExample],
    variant: Variant,
    mode: EvalMode,
    batch_size: usize,
) -> Result<EvalReport> {
    let p = predict_encoded(model, examples, variant, batch_size)?;
    let (mut correct, mut total) = (0, 0);
    let (mut scores, mut gold_acd) = (Vec::new(), Vec::new());
    for s in 0..p.gold.len() {
        for (j, g) in p.gold[s].iter().enumerate() {
            let detected = p.detection[s][j] >= ACD_THRESHOLD;
            scores.push(p.detection[s][j]);
            gold_acd.push(if g.is_some() { 1.0 } else { 0.0 });
            if let Some(g) = g {
                total += 1;
                let ok = p.polarity[s][j] == *g && (mode == EvalMode::Gold || detected);
                correct += usize::from(ok);
            }
        }
    }
    if total == 0 {
        return Err(Error::Precondition("accuracy over an empty gold set".into()));
    }
    Ok(EvalReport {
        accuracy: correct as f64 / total as f64,
        correct,
        total,
        acd: acd_metrics(&scores, &gold_acd, ACD_THRESHOLD),
    })
}

pub const ATTENTION_DUMP_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DumpNode {
    pub index: usize,
    /// Constituent tag; for collapsed leaves the preterminal tag.
    pub label: String,
    pub token: Option<String>,
    /// Half-open token span `[start, end)`.
    pub span: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryAttention {
    pub category: String,
    /// Detection probability (diagonal of the ACD output).
    pub detection: f64,
    pub distribution: Vec<f64>,
    pub predicted: Polarity,
    pub gold: Option<Polarity>,
    /// Weight per node, in graph order.
    pub beta: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GatAlphas {
    pub acd: NodeAlphas,
    pub acsa: NodeAlphas,
}

/// Attention weights of one sentence. Version 1 schema:
/// `nodes[k]` describes node `k`; `categories[j].beta[k]` is the weight of
/// node `k` for category `j`; `alpha.acd[k][l]` is head `l`'s distribution
/// over the neighbours of node `k` (absent for the tree-free variant).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttentionDump {
    pub version: u32,
    pub id: String,
    pub variant: Variant,
    pub tokens: Vec<String>,
    pub nodes: Vec<DumpNode>,
    pub categories: Vec<CategoryAttention>,
    pub alpha: Option<GatAlphas>,
}

impl AttentionDump {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dump serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }

    /// Categories detected at [`ACD_THRESHOLD`].
    pub fn detected(&self) -> impl Iterator<Item = &CategoryAttention> {
        self.categories.iter().filter(|c| c.detection >= ACD_THRESHOLD)
    }

    /// Renders β as a heatmap: one row per category, one column per node,
    /// `cell` pixels square, white for 0 and dark red for the row maximum.
    pub fn render_heatmap(&self, path: &Path, cell: u32) -> Result<()> {
        let cols = self.nodes.len() as u32;
        let rows = self.categories.len() as u32;
        let mut img = image::RgbImage::new(cols * cell, rows * cell);
        for (r, cat) in self.categories.iter().enumerate() {
            let max = cat.beta.iter().cloned().fold(0.0, f64::max).max(1e-12);
            for (c, &w) in cat.beta.iter().enumerate() {
                let t = (w / max).clamp(0.0, 1.0);
                let px = image::Rgb([
                    (255.0 - 100.0 * t) as u8,
                    (255.0 * (1.0 - t)) as u8,
                    (255.0 * (1.0 - t)) as u8,
                ]);
                for y in 0..cell {
                    for x in 0..cell {
                        img.put_pixel(c as u32 * cell + x, r as u32 * cell + y, px);
                    }
                }
            }
        }
        img.save_with_format(path, image::ImageFormat::Png)
            .map_err(|e| Error::io(path, std::io::Error::other(e)))
    }
}

/// Graph built from an example's parse, checked against its tokens.
pub fn example_graph(example: &Example, opts: GraphOptions) -> Result<ConstituencyGraph> {
    if !example.has_parse() {
        return Err(Error::Precondition(format!(
            "example {} has no parse attached",
            example.id
        )));
    }
    let graph = tree_to_graph(&parse_bracketed(&example.parse)?, opts)?;
    if graph.tokens() != example.tokens {
        return Err(Error::Alignment(format!(
            "example {}: tokens differ from the parse leaves",
            example.id
        )));
    }
    Ok(graph)
}

/// Runs `model` on one example and collects its attention weights.
pub fn dump_attention(
    model: &Scan,
    vocab: &Vocab,
    categories: &[String],
    example: &Example,
    variant: Variant,
    opts: GraphOptions,
) -> Result<AttentionDump> {
    let graph = example_graph(example, opts)?;
    let encoded = EncodedExample {
        id: example.id.clone(),
        token_ids: vocab.encode(&example.tokens),
        gold: categories
            .iter()
            .map(|c| example.polarity_of(c).map(Polarity::index))
            .collect(),
        graph,
    };
    let batch = batchify(std::slice::from_ref(&encoded), 1, None)?.remove(0);
    let out = model.forward(&batch, variant)?;
    Ok(build_dump(&encoded, example, categories, variant, &out))
}

fn build_dump(
    e: &EncodedExample,
    example: &Example,
    categories: &[String],
    variant: Variant,
    out: &ModelOutput,
) -> AttentionDump {
    let g = &e.graph;
    let width = if variant.uses_tree() { g.num_nodes() } else { g.n() };
    let nodes = (0..width)
        .map(|k| {
            let n = g.node(k);
            DumpNode {
                index: k,
                label: n.label.clone(),
                token: n.token.clone(),
                span: n.span,
            }
        })
        .collect();
    let cats = categories
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let dist = out.y_hat_acsa.slice(ndarray::s![0, j, ..]).to_vec();
            CategoryAttention {
                category: c.clone(),
                detection: out.y_hat_acd[[0, j, j]],
                predicted: Polarity::from_index(argmax(&dist)).expect("three polarities"),
                distribution: dist,
                gold: e.gold[j].and_then(Polarity::from_index),
                beta: out.beta.slice(ndarray::s![0, j, ..width]).to_vec(),
            }
        })
        .collect();
    AttentionDump {
        version: ATTENTION_DUMP_VERSION,
        id: example.id.clone(),
        variant,
        tokens: example.tokens.clone(),
        nodes,
        categories: cats,
        alpha: out.alpha[0].as_ref().map(|a| GatAlphas {
            acd: a.acd.clone(),
            acsa: a.acsa.clone(),
        }),
    }
}

/// Detected categories and their polarities for one sentence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub labels: Vec<Label>,
    pub attention: AttentionDump,
}

impl Prediction {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("prediction serializes")
    }
}

/// Predicts the categories (detection at [`ACD_THRESHOLD`]) and their
/// polarities for a parsed sentence.
pub fn predict_sentence(
    model: &Scan,
    vocab: &Vocab,
    categories: &[String],
    parse: &str,
    variant: Variant,
    opts: GraphOptions,
) -> Result<Prediction> {
    let tree = parse_bracketed(parse)?;
    let tokens: Vec<String> = tree.leaves().into_iter().map(str::to_string).collect();
    let example = Example {
        id: "input".into(),
        text: tokens.join(" "),
        tokens,
        parse: tree.to_string(),
        labels: Vec::new(),
    };
    let attention = dump_attention(model, vocab, categories, &example, variant, opts)?;
    let labels = attention
        .detected()
        .map(|c| Label {
            category: c.category.clone(),
            polarity: c.predicted,
        })
        .collect();
    Ok(Prediction { labels, attention })
}

/// Mean and sample standard deviation of per-run scores.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub std: f64,
    pub runs: usize,
}

pub fn aggregate(values: &[f64]) -> Option<Aggregate> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Some(Aggregate {
        mean,
        std,
        runs: values.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub dataset: String,
    pub variant: Variant,
    pub split: String,
    /// Accuracy in percent.
    pub mean: f64,
    pub std: f64,
    pub runs: usize,
    /// Set when some runs failed and the row aggregates the rest.
    pub partial: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AblationTable {
    pub rows: Vec<AblationRow>,
}

impl AblationTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("dataset,variant,split,mean,std,runs,partial\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{:.3},{:.3},{},{}",
                r.dataset, r.variant, r.split, r.mean, r.std, r.runs, r.partial
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn get(&self, variant: Variant, split: &str) -> Option<&AblationRow> {
        self.rows
            .iter()
            .find(|r| r.variant == variant && r.split == split)
    }
}
