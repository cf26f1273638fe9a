use ndarray::{Array1, Array2, Array3};
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Architecture hyperparameters. Everything needed to allocate parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub vocab_size: usize,
    /// Embedding and hidden size `d`.
    pub dim: usize,
    /// GAT heads `L`; must divide `dim`.
    pub heads: usize,
    /// Aspect categories `N`.
    pub num_categories: usize,
    /// Sentiment labels `M`.
    pub num_polarities: usize,
    /// Negative slope of the LeakyReLU in the GAT scores.
    #[serde(default = "default_leaky_slope")]
    pub leaky_slope: f64,
}

fn default_leaky_slope() -> f64 {
    0.2
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.heads == 0 || !self.dim.is_multiple_of(self.heads) {
            return Err(Error::Config(format!(
                "dim ({}) must be a positive multiple of heads ({})",
                self.dim, self.heads
            )));
        }
        if self.vocab_size < 2 || self.num_categories == 0 || self.num_polarities < 2 {
            return Err(Error::Config(format!(
                "need vocab_size >= 2, num_categories >= 1 and num_polarities >= 2, got {}/{}/{}",
                self.vocab_size, self.num_categories, self.num_polarities
            )));
        }
        Ok(())
    }

    pub fn head_dim(&self) -> usize {
        self.dim / self.heads
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LstmParams {
    /// Input weights, gate blocks ordered input, forget, cell, output.
    pub w_ih: Array2<f64>,
    pub w_hh: Array2<f64>,
    pub bias: Array1<f64>,
}

/// One graph-attention layer. Row block `l*dh..(l+1)*dh` of `w` is the head
/// projection `W_l`; row `l` of `a` is the head's context vector, whose first
/// half scores the target node and second half the source.
#[derive(Clone, Debug, PartialEq)]
pub struct GatParams {
    pub w: Array2<f64>,
    pub a: Array2<f64>,
}

impl GatParams {
    pub fn heads(&self) -> usize {
        self.a.nrows()
    }

    pub fn head_dim(&self) -> usize {
        self.a.ncols() / 2
    }
}

/// Per-category attention: `W_j`, `b_j`, `u_j` stacked along axis 0.
#[derive(Clone, Debug, PartialEq)]
pub struct AttentionParams {
    pub w: Array3<f64>,
    pub b: Array2<f64>,
    pub u: Array2<f64>,
}

/// Detection head: row `i` of `w` with `b[i]` scores category `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct AcdHeadParams {
    pub w: Array2<f64>,
    pub b: Array1<f64>,
}

/// Sentiment head: shared `w1`, `w2`, per-category biases.
#[derive(Clone, Debug, PartialEq)]
pub struct AcsaHeadParams {
    pub w1: Array2<f64>,
    pub w2: Array2<f64>,
    pub b1: Array2<f64>,
    pub b2: Array2<f64>,
}

/// Every learnable tensor of the network. Also used as the gradient and
/// optimizer-moment container.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub embedding: Array2<f64>,
    pub lstm: LstmParams,
    pub gat_acd: GatParams,
    pub gat_acsa: GatParams,
    pub attention: AttentionParams,
    pub acd: AcdHeadParams,
    pub acsa: AcsaHeadParams,
}

/// Names of the parameter tensors in canonical order.
pub const TENSOR_NAMES: [&str; 17] = [
    "embedding",
    "lstm.w_ih",
    "lstm.w_hh",
    "lstm.bias",
    "gat_acd.w",
    "gat_acd.a",
    "gat_acsa.w",
    "gat_acsa.a",
    "attention.w",
    "attention.b",
    "attention.u",
    "acd.w",
    "acd.b",
    "acsa.w1",
    "acsa.w2",
    "acsa.b1",
    "acsa.b2",
];

impl ModelParams {
    pub fn zeros(cfg: &ModelConfig) -> Self {
        let (v, d, l, n, m) = (
            cfg.vocab_size,
            cfg.dim,
            cfg.heads,
            cfg.num_categories,
            cfg.num_polarities,
        );
        let dh = d / l.max(1);
        let gat = || GatParams {
            w: Array2::zeros((d, d)),
            a: Array2::zeros((l, 2 * dh)),
        };
        ModelParams {
            embedding: Array2::zeros((v, d)),
            lstm: LstmParams {
                w_ih: Array2::zeros((4 * d, d)),
                w_hh: Array2::zeros((4 * d, d)),
                bias: Array1::zeros(4 * d),
            },
            gat_acd: gat(),
            gat_acsa: gat(),
            attention: AttentionParams {
                w: Array3::zeros((n, d, d)),
                b: Array2::zeros((n, d)),
                u: Array2::zeros((n, d)),
            },
            acd: AcdHeadParams {
                w: Array2::zeros((n, d)),
                b: Array1::zeros(n),
            },
            acsa: AcsaHeadParams {
                w1: Array2::zeros((d, d)),
                w2: Array2::zeros((m, d)),
                b1: Array2::zeros((n, d)),
                b2: Array2::zeros((n, m)),
            },
        }
    }

    pub fn zeros_like(&self) -> Self {
        let mut z = self.clone();
        z.fill(0.0);
        z
    }

    /// Random initialisation. Embedding rows are uniform in [-0.25, 0.25]
    /// with the padding row zeroed; matrices use Glorot-uniform bounds;
    /// biases start at zero.
    pub fn init(cfg: &ModelConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = Self::zeros(cfg);
        let d = cfg.dim;

        fill_uniform(p.embedding.as_slice_mut().unwrap(), 0.25, &mut rng);
        p.embedding.row_mut(crate::data::PAD_ID).fill(0.0);

        let k = 1.0 / (d as f64).sqrt();
        fill_uniform(p.lstm.w_ih.as_slice_mut().unwrap(), k, &mut rng);
        fill_uniform(p.lstm.w_hh.as_slice_mut().unwrap(), k, &mut rng);
        fill_uniform(p.lstm.bias.as_slice_mut().unwrap(), k, &mut rng);

        let dh = cfg.head_dim();
        for gat in [&mut p.gat_acd, &mut p.gat_acsa] {
            fill_uniform(gat.w.as_slice_mut().unwrap(), glorot(dh, d), &mut rng);
            fill_uniform(gat.a.as_slice_mut().unwrap(), glorot(2 * dh, 1), &mut rng);
        }
        fill_uniform(p.attention.w.as_slice_mut().unwrap(), glorot(d, d), &mut rng);
        fill_uniform(p.attention.u.as_slice_mut().unwrap(), glorot(d, 1), &mut rng);
        fill_uniform(p.acd.w.as_slice_mut().unwrap(), glorot(d, 1), &mut rng);
        fill_uniform(p.acsa.w1.as_slice_mut().unwrap(), glorot(d, d), &mut rng);
        fill_uniform(
            p.acsa.w2.as_slice_mut().unwrap(),
            glorot(d, cfg.num_polarities),
            &mut rng,
        );
        Ok(p)
    }

    pub fn config_matches(&self, cfg: &ModelConfig) -> bool {
        let z = Self::zeros(cfg);
        self.tensors()
            .iter()
            .zip(z.tensors())
            .all(|((_, a), (_, b))| a.len() == b.len())
            && self.embedding.dim() == z.embedding.dim()
            && self.attention.w.dim() == z.attention.w.dim()
            && self.gat_acd.a.dim() == z.gat_acd.a.dim()
            && self.acsa.w2.dim() == z.acsa.w2.dim()
    }

    /// Flat views of every tensor in [`TENSOR_NAMES`] order.
    pub fn tensors(&self) -> [(&'static str, &[f64]); 17] {
        fn s(a: Option<&[f64]>) -> &[f64] {
            a.expect("parameters are contiguous")
        }
        [
            (TENSOR_NAMES[0], s(self.embedding.as_slice())),
            (TENSOR_NAMES[1], s(self.lstm.w_ih.as_slice())),
            (TENSOR_NAMES[2], s(self.lstm.w_hh.as_slice())),
            (TENSOR_NAMES[3], s(self.lstm.bias.as_slice())),
            (TENSOR_NAMES[4], s(self.gat_acd.w.as_slice())),
            (TENSOR_NAMES[5], s(self.gat_acd.a.as_slice())),
            (TENSOR_NAMES[6], s(self.gat_acsa.w.as_slice())),
            (TENSOR_NAMES[7], s(self.gat_acsa.a.as_slice())),
            (TENSOR_NAMES[8], s(self.attention.w.as_slice())),
            (TENSOR_NAMES[9], s(self.attention.b.as_slice())),
            (TENSOR_NAMES[10], s(self.attention.u.as_slice())),
            (TENSOR_NAMES[11], s(self.acd.w.as_slice())),
            (TENSOR_NAMES[12], s(self.acd.b.as_slice())),
            (TENSOR_NAMES[13], s(self.acsa.w1.as_slice())),
            (TENSOR_NAMES[14], s(self.acsa.w2.as_slice())),
            (TENSOR_NAMES[15], s(self.acsa.b1.as_slice())),
            (TENSOR_NAMES[16], s(self.acsa.b2.as_slice())),
        ]
    }

    pub fn tensors_mut(&mut self) -> [(&'static str, &mut [f64]); 17] {
        fn s(a: Option<&mut [f64]>) -> &mut [f64] {
            a.expect("parameters are contiguous")
        }
        [
            (TENSOR_NAMES[0], s(self.embedding.as_slice_mut())),
            (TENSOR_NAMES[1], s(self.lstm.w_ih.as_slice_mut())),
            (TENSOR_NAMES[2], s(self.lstm.w_hh.as_slice_mut())),
            (TENSOR_NAMES[3], s(self.lstm.bias.as_slice_mut())),
            (TENSOR_NAMES[4], s(self.gat_acd.w.as_slice_mut())),
            (TENSOR_NAMES[5], s(self.gat_acd.a.as_slice_mut())),
            (TENSOR_NAMES[6], s(self.gat_acsa.w.as_slice_mut())),
            (TENSOR_NAMES[7], s(self.gat_acsa.a.as_slice_mut())),
            (TENSOR_NAMES[8], s(self.attention.w.as_slice_mut())),
            (TENSOR_NAMES[9], s(self.attention.b.as_slice_mut())),
            (TENSOR_NAMES[10], s(self.attention.u.as_slice_mut())),
            (TENSOR_NAMES[11], s(self.acd.w.as_slice_mut())),
            (TENSOR_NAMES[12], s(self.acd.b.as_slice_mut())),
            (TENSOR_NAMES[13], s(self.acsa.w1.as_slice_mut())),
            (TENSOR_NAMES[14], s(self.acsa.w2.as_slice_mut())),
            (TENSOR_NAMES[15], s(self.acsa.b1.as_slice_mut())),
            (TENSOR_NAMES[16], s(self.acsa.b2.as_slice_mut())),
        ]
    }

    pub fn fill(&mut self, value: f64) {
        for (_, t) in self.tensors_mut() {
            t.fill(value);
        }
    }

    pub fn num_parameters(&self) -> usize {
        self.tensors().iter().map(|(_, t)| t.len()).sum()
    }

    /// Squared L2 norm over every parameter.
    pub fn squared_norm(&self) -> f64 {
        self.tensors()
            .iter()
            .flat_map(|(_, t)| t.iter())
            .map(|x| x * x)
            .sum()
    }

    /// `self += scale * other`, tensor by tensor.
    pub fn add_scaled(&mut self, other: &ModelParams, scale: f64) {
        for ((_, dst), (_, src)) in self.tensors_mut().into_iter().zip(other.tensors()) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += scale * s;
            }
        }
    }

    pub fn all_finite(&self) -> bool {
        self.tensors()
            .iter()
            .all(|(_, t)| t.iter().all(|x| x.is_finite()))
    }
}

fn glorot(fan_out: usize, fan_in: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt()
}

fn fill_uniform(dst: &mut [f64], bound: f64, rng: &mut ChaCha8Rng) {
    let dist = Uniform::new_inclusive(-bound, bound);
    for x in dst {
        *x = dist.sample(rng);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ModelConfig {
        ModelConfig {
            vocab_size: 5,
            dim: 8,
            heads: 2,
            num_categories: 3,
            num_polarities: 3,
            leaky_slope: 0.2,
        }
    }

    #[test]
    fn shapes_follow_config() {
        let p = ModelParams::init(&cfg(), 1).unwrap();
        assert_eq!(p.embedding.dim(), (5, 8));
        assert_eq!(p.gat_acd.w.dim(), (8, 8));
        assert_eq!(p.gat_acd.a.dim(), (2, 8));
        assert_eq!(p.attention.w.dim(), (3, 8, 8));
        assert_eq!(p.acsa.w2.dim(), (3, 8));
        assert_eq!(p.acsa.b2.dim(), (3, 3));
        assert!(p.embedding.row(0).iter().all(|&x| x == 0.0));
        assert!(p.config_matches(&cfg()));
    }

    #[test]
    fn init_is_seeded() {
        let a = ModelParams::init(&cfg(), 7).unwrap();
        let b = ModelParams::init(&cfg(), 7).unwrap();
        let c = ModelParams::init(&cfg(), 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn heads_must_divide_dim() {
        let mut c = cfg();
        c.heads = 3;
        assert!(ModelParams::init(&c, 0).is_err());
    }

    #[test]
    fn squared_norm_grows_with_magnitude() {
        let mut p = ModelParams::init(&cfg(), 3).unwrap();
        let before = p.squared_norm();
        p.acd.b[0] += 10.0;
        assert!(p.squared_norm() > before);
    }
}
