use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Example, Vocab, PAD_ID};
use crate::error::{Error, Result};
use crate::model::Batch;
use crate::treebank::{parse_bracketed, tree_to_graph, ConstituencyGraph, GraphOptions};

/// An example mapped to ids with its graph built.
#[derive(Clone, Debug)]
pub struct EncodedExample {
    pub id: String,
    pub token_ids: Vec<usize>,
    pub graph: ConstituencyGraph,
    /// Gold polarity index per category, `None` where not mentioned.
    pub gold: Vec<Option<usize>>,
}

pub fn encode_examples(
    examples: &[Example],
    vocab: &Vocab,
    categories: &[String],
    opts: GraphOptions,
) -> Result<Vec<EncodedExample>> {
    examples
        .iter()
        .map(|e| {
            if !e.has_parse() {
                return Err(Error::Precondition(format!(
                    "example {} has no parse attached",
                    e.id
                )));
            }
            let tree = parse_bracketed(&e.parse)?;
            let graph = tree_to_graph(&tree, opts)?;
            if graph.tokens() != e.tokens {
                return Err(Error::Alignment(format!(
                    "example {}: tokens differ from the parse leaves",
                    e.id
                )));
            }
            for l in &e.labels {
                if !categories.contains(&l.category) {
                    return Err(Error::Schema(format!(
                        "example {} uses unknown category `{}`",
                        e.id, l.category
                    )));
                }
            }
            let gold = categories
                .iter()
                .map(|c| e.polarity_of(c).map(|p| p.index()))
                .collect();
            Ok(EncodedExample {
                id: e.id.clone(),
                token_ids: vocab.encode(&e.tokens),
                graph,
                gold,
            })
        })
        .collect()
}

/// Groups examples into padded batches. With a seed the order is shuffled
/// first; without one the original order is kept.
pub fn batchify(
    examples: &[EncodedExample],
    batch_size: usize,
    seed: Option<u64>,
) -> Result<Vec<Batch>> {
    if batch_size == 0 {
        return Err(Error::Config("batch size must be positive".into()));
    }
    let mut order: Vec<usize> = (0..examples.len()).collect();
    if let Some(seed) = seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    Ok(order
        .chunks(batch_size)
        .map(|chunk| make_batch(chunk.iter().map(|&i| &examples[i])))
        .collect())
}

fn make_batch<'a>(items: impl Iterator<Item = &'a EncodedExample> + Clone) -> Batch {
    let b = items.clone().count();
    let n_cat = items.clone().next().map_or(0, |e| e.gold.len());
    let t_max = items.clone().map(|e| e.graph.n()).max().unwrap_or(0);
    let m_max = items.clone().map(|e| e.graph.m()).max().unwrap_or(0);

    let mut token_ids = Array2::from_elem((b, t_max), PAD_ID);
    let mut token_mask = Array2::from_elem((b, t_max), false);
    let mut node_mask = Array2::from_elem((b, t_max + m_max), false);
    let mut gold_acd = Array2::zeros((b, n_cat));
    let mut gold_acsa = Array2::from_elem((b, n_cat), None);
    let mut mentioned_mask = Array2::from_elem((b, n_cat), false);
    let mut ids = Vec::with_capacity(b);
    let mut graphs = Vec::with_capacity(b);
    for (row, e) in items.enumerate() {
        for (t, &id) in e.token_ids.iter().enumerate() {
            token_ids[[row, t]] = id;
            token_mask[[row, t]] = true;
        }
        for k in 0..e.graph.num_nodes() {
            node_mask[[row, k]] = true;
        }
        for (j, g) in e.gold.iter().enumerate() {
            gold_acsa[[row, j]] = *g;
            mentioned_mask[[row, j]] = g.is_some();
            gold_acd[[row, j]] = if g.is_some() { 1.0 } else { 0.0 };
        }
        ids.push(e.id.clone());
        graphs.push(e.graph.clone());
    }
    Batch {
        ids,
        token_ids,
        token_mask,
        graphs,
        node_mask,
        gold_acd,
        gold_acsa,
        mentioned_mask,
    }
}
