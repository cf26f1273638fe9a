#![allow(dead_code)]

pub mod checks;
pub mod oracle;

use ndarray::Array2;
use scan_core::data::PAD_ID;
use scan_core::model::{Batch, LossWeights, ModelConfig, ModelParams, Scan, Variant};
use scan_core::treebank::{parse_bracketed, tree_to_graph, GraphOptions};

/// d=8, L=2, N=3, M=3 network over a five-token vocabulary.
pub fn toy_model(seed: u64) -> Scan {
    let cfg = ModelConfig {
        vocab_size: 5,
        dim: 8,
        heads: 2,
        num_categories: 3,
        num_polarities: 3,
        leaky_slope: 0.2,
    };
    Scan::new(cfg, seed).unwrap()
}

/// One-sentence batch for "(S (NP a b) (VP c))" with categories 0 and 2
/// mentioned.
pub fn toy_batch(opts: GraphOptions) -> Batch {
    sentence_batch("(S (NP a b) (VP c))", &[2, 3, 4], &[Some(1), None, Some(0)], opts)
}

pub fn sentence_batch(
    parse: &str,
    ids: &[usize],
    gold: &[Option<usize>],
    opts: GraphOptions,
) -> Batch {
    let graph = tree_to_graph(&parse_bracketed(parse).unwrap(), opts).unwrap();
    let n = ids.len();
    let k = graph.n() + graph.m();
    let n_cat = gold.len();
    let mut node_mask = Array2::from_elem((1, n + graph.m()), false);
    for i in 0..k {
        node_mask[[0, i]] = true;
    }
    let mut token_ids = Array2::from_elem((1, n), PAD_ID);
    for (t, &id) in ids.iter().enumerate() {
        token_ids[[0, t]] = id;
    }
    Batch {
        ids: vec!["s0".into()],
        token_ids,
        token_mask: Array2::from_elem((1, n), true),
        graphs: vec![graph],
        node_mask,
        gold_acd: Array2::from_shape_fn((1, n_cat), |(_, j)| {
            if gold[j].is_some() {
                1.0
            } else {
                0.0
            }
        }),
        gold_acsa: Array2::from_shape_fn((1, n_cat), |(_, j)| gold[j]),
        mentioned_mask: Array2::from_shape_fn((1, n_cat), |(_, j)| gold[j].is_some()),
    }
}

pub struct GroupError {
    pub name: &'static str,
    pub max_rel: f64,
    pub max_abs_grad: f64,
}

/// Denominator floor of [`rel_error`]. Central differences at step 1e-5 on a
/// loss of order 10 carry roundoff near `10 * 1.1e-16 / 1e-5 = 1e-10`, so
/// entries below this floor are compared absolutely at 1e-4 * 1e-6.
pub const REL_FLOOR: f64 = 1e-6;

pub fn rel_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(REL_FLOOR)
}

/// Central differences of the total loss against the analytic gradient for
/// every parameter, reported per tensor.
pub fn gradient_check(
    model: &Scan,
    batch: &Batch,
    weights: &LossWeights,
    variant: Variant,
    step: f64,
) -> Vec<GroupError> {
    let (_, grad) = model.loss_and_grad(batch, weights, variant).unwrap();
    let grads: Vec<Vec<f64>> = grad.tensors().iter().map(|(_, t)| t.to_vec()).collect();
    let mut probe = model.clone();
    let mut out = Vec::new();
    for (g, analytic) in grads.iter().enumerate() {
        let mut max_rel: f64 = 0.0;
        let mut max_abs: f64 = 0.0;
        for (i, &a) in analytic.iter().enumerate() {
            let orig = probe.params.tensors()[g].1[i];
            let mut at = |x: f64| {
                set(&mut probe.params, g, i, x);
                probe.loss(batch, weights, variant).unwrap().total
            };
            let numeric = (at(orig + step) - at(orig - step)) / (2.0 * step);
            set(&mut probe.params, g, i, orig);
            max_rel = max_rel.max(rel_error(a, numeric));
            max_abs = max_abs.max(a.abs());
        }
        out.push(GroupError {
            name: scan_core::model::TENSOR_NAMES[g],
            max_rel,
            max_abs_grad: max_abs,
        });
    }
    out
}

fn set(p: &mut ModelParams, group: usize, i: usize, v: f64) {
    p.tensors_mut()[group].1[i] = v;
}
