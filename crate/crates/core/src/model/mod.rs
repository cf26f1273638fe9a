//! The SCAN network: embeddings, an LSTM encoder, two graph-attention layers
//! over the constituency graph (one feeding category detection, one feeding
//! sentiment), per-category attention shared by both heads, and the
//! combined training objective.

mod layers;
mod loss;
mod params;

use std::fmt;
use std::str::FromStr;

use ndarray::{s, Array2, Array3, Axis};
use serde::{Deserialize, Serialize};

pub use layers::{
    acd_predict, acsa_predict, aspect_attention, embed, encode, gat_coefficients, gat_layer,
    sigmoid, softmax,
};
pub use loss::{loss_acd, loss_acsa, loss_iloss, total_loss, LossWeights, PROB_EPS};
pub use params::{
    AcdHeadParams, AcsaHeadParams, AttentionParams, GatParams, LstmParams, ModelConfig,
    ModelParams, TENSOR_NAMES,
};

use crate::error::{Error, Result};
use crate::treebank::ConstituencyGraph;
use layers::{AttentionCache, GatCache, HeadsCache, LstmCache};

/// Model variants compared in the ablation study.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Full,
    /// Full network trained without the interactive loss.
    NoIloss,
    /// Attention and heads read the LSTM states directly; no graph layers.
    NoTree,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Full, Variant::NoIloss, Variant::NoTree];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::NoIloss => "no_iloss",
            Variant::NoTree => "no_tree",
        }
    }

    pub fn uses_tree(self) -> bool {
        self != Variant::NoTree
    }

    /// Loss weights this variant trains with.
    pub fn adjust_weights(self, mut w: LossWeights) -> LossWeights {
        if self == Variant::NoIloss {
            w.iloss = 0.0;
        }
        w
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Variant::Full),
            "no_iloss" => Ok(Variant::NoIloss),
            "no_tree" => Ok(Variant::NoTree),
            other => Err(Error::Config(format!(
                "unknown variant `{other}` (expected full, no_iloss or no_tree)"
            ))),
        }
    }
}

/// A padded mini-batch.
#[derive(Clone, Debug)]
pub struct Batch {
    pub ids: Vec<String>,
    /// `B x T`, padded with the padding id.
    pub token_ids: Array2<usize>,
    pub token_mask: Array2<bool>,
    pub graphs: Vec<ConstituencyGraph>,
    /// `B x (T + M_max)`; true exactly on the `n + m` real nodes, which
    /// occupy the leading positions in graph order.
    pub node_mask: Array2<bool>,
    /// `B x N` detection targets.
    pub gold_acd: Array2<f64>,
    /// `B x N` gold polarity index, `None` where the category is absent.
    pub gold_acsa: Array2<Option<usize>>,
    pub mentioned_mask: Array2<bool>,
}

impl Batch {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Token ids of sentence `b` without padding.
    pub fn tokens(&self, b: usize) -> Vec<usize> {
        let n = self.graphs[b].n();
        self.token_ids.row(b).iter().take(n).copied().collect()
    }

    pub fn gold_sentiment(&self, b: usize) -> Vec<Option<usize>> {
        self.gold_acsa.row(b).to_vec()
    }

    /// Checks the mask and label invariants against the graphs.
    pub fn validate(&self, num_categories: usize) -> Result<()> {
        let b = self.len();
        let rows = [
            self.token_ids.nrows(),
            self.token_mask.nrows(),
            self.graphs.len(),
            self.node_mask.nrows(),
            self.gold_acd.nrows(),
            self.gold_acsa.nrows(),
            self.mentioned_mask.nrows(),
        ];
        if rows.iter().any(|&r| r != b) {
            return Err(Error::Shape(format!("batch rows disagree: {rows:?} vs {b}")));
        }
        if self.gold_acd.ncols() != num_categories
            || self.gold_acsa.ncols() != num_categories
            || self.mentioned_mask.ncols() != num_categories
        {
            return Err(Error::Shape(format!(
                "label width does not match {num_categories} categories"
            )));
        }
        for (i, g) in self.graphs.iter().enumerate() {
            let n = g.n();
            let tm = self.token_mask.row(i);
            if n > tm.len() || (0..tm.len()).any(|t| tm[t] != (t < n)) {
                return Err(Error::Shape(format!("token mask of sentence {i} is misaligned")));
            }
            let nm = self.node_mask.row(i);
            let k = g.num_nodes();
            if k > nm.len() || (0..nm.len()).any(|t| nm[t] != (t < k)) {
                return Err(Error::Shape(format!("node mask of sentence {i} is misaligned")));
            }
            for j in 0..num_categories {
                let mentioned = self.mentioned_mask[[i, j]];
                if mentioned != self.gold_acsa[[i, j]].is_some()
                    || (self.gold_acd[[i, j]] == 1.0) != mentioned
                {
                    return Err(Error::Shape(format!(
                        "labels of sentence {i}, category {j} are inconsistent"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Per-node, per-head GAT coefficients over each node's neighbours.
pub type NodeAlphas = Vec<Vec<Vec<f64>>>;

#[derive(Clone, Debug)]
pub struct SentenceAlpha {
    pub acd: NodeAlphas,
    pub acsa: NodeAlphas,
}

#[derive(Clone, Debug)]
pub struct ModelOutput {
    /// `B x N x N`; entry `[b, j, i]` is category `i` predicted from
    /// category `j`'s representation.
    pub y_hat_acd: Array3<f64>,
    /// `B x N x M`.
    pub y_hat_acsa: Array3<f64>,
    /// `B x N x width`; zero on padding.
    pub beta: Array3<f64>,
    /// `None` for the tree-free variant.
    pub alpha: Vec<Option<SentenceAlpha>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    /// Batch means of the per-sentence task losses.
    pub acd: f64,
    pub iloss: f64,
    pub acsa: f64,
    /// `||theta||^2`, unweighted.
    pub l2: f64,
    pub total: f64,
}

/// Forward intermediates of one sentence.
struct SentencePass {
    token_ids: Vec<usize>,
    lstm: LstmCache,
    h: Array2<f64>,
    gat: Option<(GatCache, GatCache)>,
    g_acd: Array2<f64>,
    g_acsa: Array2<f64>,
    att: AttentionCache,
    heads: HeadsCache,
}

/// A configured network.
#[derive(Clone, Debug, PartialEq)]
pub struct Scan {
    pub config: ModelConfig,
    pub params: ModelParams,
}

impl Scan {
    pub fn new(config: ModelConfig, seed: u64) -> Result<Self> {
        let params = ModelParams::init(&config, seed)?;
        Ok(Scan { config, params })
    }

    pub fn from_parts(config: ModelConfig, params: ModelParams) -> Result<Self> {
        config.validate()?;
        if !params.config_matches(&config) {
            return Err(Error::Shape("parameters do not match the model config".into()));
        }
        Ok(Scan { config, params })
    }

    fn sentence_forward(
        &self,
        token_ids: Vec<usize>,
        graph: &ConstituencyGraph,
        variant: Variant,
    ) -> Result<SentencePass> {
        if token_ids.len() != graph.n() {
            return Err(Error::Shape(format!(
                "{} tokens for a graph with {} leaves",
                token_ids.len(),
                graph.n()
            )));
        }
        let p = &self.params;
        let e = embed(&token_ids, &p.embedding)?;
        let (h, lstm) = layers::lstm_forward(e, &p.lstm)?;
        let (g_acd, g_acsa, gat) = if variant.uses_tree() {
            let slope = self.config.leaky_slope;
            let (g_acd, c_acd) = layers::gat_forward(h.clone(), graph, &p.gat_acd, slope)?;
            let (g_acsa, c_acsa) = layers::gat_forward(h.clone(), graph, &p.gat_acsa, slope)?;
            (g_acd, g_acsa, Some((c_acd, c_acsa)))
        } else {
            (h.clone(), h.clone(), None)
        };
        let att = layers::attention_forward(&g_acd, &p.attention);
        let heads = layers::heads_forward(&att.beta, &g_acd, &g_acsa, &p.acd, &p.acsa);
        Ok(SentencePass {
            token_ids,
            lstm,
            h,
            gat,
            g_acd,
            g_acsa,
            att,
            heads,
        })
    }

    fn sentence_backward(
        &self,
        pass: &SentencePass,
        graph: &ConstituencyGraph,
        dy_acd: &Array2<f64>,
        dy_acsa: &Array2<f64>,
        grad: &mut ModelParams,
    ) {
        let p = &self.params;
        let hg = layers::heads_backward(
            &pass.heads,
            &pass.att.beta,
            &pass.g_acd,
            &pass.g_acsa,
            dy_acd,
            dy_acsa,
            &p.acd,
            &p.acsa,
            &mut grad.acd,
            &mut grad.acsa,
        );
        let mut dg_acd = hg.dg_acd;
        dg_acd += &layers::attention_backward(
            &pass.att,
            &pass.g_acd,
            &hg.dbeta,
            &p.attention,
            &mut grad.attention,
        );
        let dh = match &pass.gat {
            Some((c_acd, c_acsa)) => {
                let slope = self.config.leaky_slope;
                let mut dh = layers::gat_backward(
                    c_acd,
                    graph,
                    &dg_acd,
                    &p.gat_acd,
                    &mut grad.gat_acd,
                    slope,
                );
                dh += &layers::gat_backward(
                    c_acsa,
                    graph,
                    &hg.dg_acsa,
                    &p.gat_acsa,
                    &mut grad.gat_acsa,
                    slope,
                );
                dh
            }
            None => dg_acd + &hg.dg_acsa,
        };
        debug_assert_eq!(dh.dim(), pass.h.dim());
        let dx = layers::lstm_backward(&pass.lstm, &dh, &p.lstm, &mut grad.lstm);
        for (&id, row) in pass.token_ids.iter().zip(dx.rows()) {
            let mut dst = grad.embedding.row_mut(id);
            dst += &row;
        }
    }

    /// Runs the network over a batch.
    pub fn forward(&self, batch: &Batch, variant: Variant) -> Result<ModelOutput> {
        batch.validate(self.config.num_categories)?;
        let (b_len, n_cat, m_pol) = (
            batch.len(),
            self.config.num_categories,
            self.config.num_polarities,
        );
        let width = if variant.uses_tree() {
            batch.node_mask.ncols()
        } else {
            batch.token_mask.ncols()
        };
        let mut out = ModelOutput {
            y_hat_acd: Array3::zeros((b_len, n_cat, n_cat)),
            y_hat_acsa: Array3::zeros((b_len, n_cat, m_pol)),
            beta: Array3::zeros((b_len, n_cat, width)),
            alpha: Vec::with_capacity(b_len),
        };
        for b in 0..b_len {
            let pass = self.sentence_forward(batch.tokens(b), &batch.graphs[b], variant)?;
            let k = pass.att.beta.ncols();
            out.y_hat_acd
                .index_axis_mut(Axis(0), b)
                .assign(&pass.heads.y_acd);
            out.y_hat_acsa
                .index_axis_mut(Axis(0), b)
                .assign(&pass.heads.y_acsa);
            out.beta
                .slice_mut(s![b, .., ..k])
                .assign(&pass.att.beta);
            out.alpha.push(pass.gat.map(|(acd, acsa)| SentenceAlpha {
                acd: acd.alpha,
                acsa: acsa.alpha,
            }));
        }
        Ok(out)
    }

    /// Objective value without gradients.
    pub fn loss(&self, batch: &Batch, weights: &LossWeights, variant: Variant) -> Result<LossBreakdown> {
        let out = self.forward(batch, variant)?;
        Ok(self.breakdown(batch, &out, weights))
    }

    fn breakdown(&self, batch: &Batch, out: &ModelOutput, weights: &LossWeights) -> LossBreakdown {
        let b_len = batch.len().max(1) as f64;
        let mut lb = LossBreakdown::default();
        for b in 0..batch.len() {
            let y_acd = out.y_hat_acd.index_axis(Axis(0), b);
            lb.acd += loss_acd(y_acd, batch.gold_acd.row(b));
            lb.iloss += loss_iloss(y_acd);
            lb.acsa += loss_acsa(
                out.y_hat_acsa.index_axis(Axis(0), b),
                &batch.gold_sentiment(b),
            );
        }
        lb.acd /= b_len;
        lb.iloss /= b_len;
        lb.acsa /= b_len;
        lb.l2 = self.params.squared_norm();
        lb.total = total_loss(lb.acd, lb.iloss, lb.acsa, &self.params, weights);
        lb
    }

    /// Objective value and its gradient with respect to every parameter.
    pub fn loss_and_grad(
        &self,
        batch: &Batch,
        weights: &LossWeights,
        variant: Variant,
    ) -> Result<(LossBreakdown, ModelParams)> {
        batch.validate(self.config.num_categories)?;
        let b_len = batch.len().max(1) as f64;
        let mut grad = self.params.zeros_like();
        let mut lb = LossBreakdown::default();
        for b in 0..batch.len() {
            let graph = &batch.graphs[b];
            let pass = self.sentence_forward(batch.tokens(b), graph, variant)?;
            let gold_acd = batch.gold_acd.row(b);
            let gold_acsa = batch.gold_sentiment(b);
            let y_acd = pass.heads.y_acd.view();
            let y_acsa = pass.heads.y_acsa.view();
            lb.acd += loss_acd(y_acd, gold_acd);
            lb.iloss += loss_iloss(y_acd);
            lb.acsa += loss_acsa(y_acsa, &gold_acsa);
            let dy_acd = loss::detection_grad(
                y_acd,
                gold_acd,
                weights.acd / b_len,
                weights.iloss / b_len,
            );
            let dy_acsa = loss::sentiment_grad(y_acsa, &gold_acsa, weights.acsa / b_len);
            self.sentence_backward(&pass, graph, &dy_acd, &dy_acsa, &mut grad);
        }
        lb.acd /= b_len;
        lb.iloss /= b_len;
        lb.acsa /= b_len;
        lb.l2 = self.params.squared_norm();
        lb.total = total_loss(lb.acd, lb.iloss, lb.acsa, &self.params, weights);
        grad.add_scaled(&self.params, 2.0 * weights.l2);
        Ok((lb, grad))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.as_str().parse::<Variant>().unwrap(), v);
        }
        assert!("tree".parse::<Variant>().is_err());
    }

    #[test]
    fn only_no_iloss_changes_weights() {
        let w = LossWeights::default();
        assert_eq!(Variant::Full.adjust_weights(w), w);
        assert_eq!(Variant::NoTree.adjust_weights(w), w);
        let a = Variant::NoIloss.adjust_weights(w);
        assert_eq!(a.iloss, 0.0);
        assert_eq!((a.acd, a.acsa, a.l2), (w.acd, w.acsa, w.l2));
    }
}
