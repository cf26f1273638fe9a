use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use ndarray::Array2;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Vocab, PAD_ID};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub covered: usize,
    pub total: usize,
    /// Rows filled through a lowercased match.
    pub lowercase_matches: usize,
}

impl Coverage {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.covered as f64 / self.total as f64
        }
    }
}

/// Builds an embedding matrix for `vocab` from a GloVe text file (`token`
/// followed by `dim` floats per line). Tokens missing from the file get
/// uniform vectors in [-0.25, 0.25] drawn with `seed`; the padding row is
/// zero. A token missing verbatim falls back to its lowercased form.
pub fn load_pretrained_embeddings(
    vocab: &Vocab,
    path: &Path,
    dim: usize,
    seed: u64,
) -> Result<(Array2<f64>, Coverage)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_embeddings(vocab, BufReader::new(file), dim, seed)
        .map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })
}

#[derive(Clone, Copy, PartialEq)]
enum Fill {
    Random,
    Lowercase,
    Exact,
}

pub(crate) fn read_embeddings(
    vocab: &Vocab,
    reader: impl BufRead,
    dim: usize,
    seed: u64,
) -> Result<(Array2<f64>, Coverage)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-0.25, 0.25);
    let mut m = Array2::from_shape_simple_fn((vocab.len(), dim), || dist.sample(&mut rng));
    m.row_mut(PAD_ID).fill(0.0);

    // lowercased form -> ids of vocabulary entries that lowercase to it
    let mut lower: std::collections::HashMap<String, Vec<usize>> = Default::default();
    for (id, t) in vocab.tokens().iter().enumerate().skip(2) {
        let l = t.to_lowercase();
        if l != *t {
            lower.entry(l).or_default().push(id);
        }
    }
    let mut fill = vec![Fill::Random; vocab.len()];
    let mut values = Vec::with_capacity(dim);

    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<embeddings>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(' ').filter(|f| !f.is_empty()).collect();
        let bad_width = if i == 0 {
            fields.len() != dim + 1
        } else {
            fields.len() < dim + 1
        };
        if bad_width {
            return Err(Error::Format {
                line: i + 1,
                message: format!(
                    "expected a token and {dim} values, found {} fields",
                    fields.len()
                ),
            });
        }
        let split = fields.len() - dim;
        let token = fields[..split].join(" ");
        let exact = vocab.get(&token).filter(|&id| id >= 2);
        let lowered = lower.get(&token);
        if exact.is_none() && lowered.is_none() {
            continue;
        }
        values.clear();
        for f in &fields[split..] {
            values.push(f.parse::<f64>().map_err(|_| Error::Format {
                line: i + 1,
                message: format!("`{f}` is not a number"),
            })?);
        }
        if let Some(id) = exact {
            m.row_mut(id).assign(&ndarray::aview1(&values));
            fill[id] = Fill::Exact;
        }
        for &id in lowered.into_iter().flatten() {
            if fill[id] == Fill::Random {
                m.row_mut(id).assign(&ndarray::aview1(&values));
                fill[id] = Fill::Lowercase;
            }
        }
    }
    let coverage = Coverage {
        covered: fill.iter().filter(|f| **f != Fill::Random).count(),
        total: vocab.len(),
        lowercase_matches: fill.iter().filter(|f| **f == Fill::Lowercase).count(),
    };
    Ok((m, coverage))
}
