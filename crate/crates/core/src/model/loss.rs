//! Training objectives. All take probabilities and clamp them into
//! `[PROB_EPS, 1 - PROB_EPS]` before any logarithm.

use ndarray::{Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use super::params::ModelParams;

pub const PROB_EPS: f64 = 1e-12;

fn clamp(p: f64) -> f64 {
    p.clamp(PROB_EPS, 1.0 - PROB_EPS)
}

/// d/dp of `log(clamp(p))`; zero where the clamp is active.
fn dlog(p: f64) -> f64 {
    if (PROB_EPS..=1.0 - PROB_EPS).contains(&p) {
        1.0 / p
    } else {
        0.0
    }
}

/// d/dp of `log(1 - clamp(p))`.
fn dlog1m(p: f64) -> f64 {
    if (PROB_EPS..=1.0 - PROB_EPS).contains(&p) {
        -1.0 / (1.0 - p)
    } else {
        0.0
    }
}

/// Binary cross-entropy of each category's own detection probability:
/// only the diagonal `y_hat[j][j]` enters.
pub fn loss_acd(y_hat: ArrayView2<f64>, gold: ArrayView1<f64>) -> f64 {
    -(0..gold.len())
        .map(|j| {
            let p = clamp(y_hat[[j, j]]);
            gold[j] * p.ln() + (1.0 - gold[j]) * (1.0 - p).ln()
        })
        .sum::<f64>()
}

/// Interactive loss: penalises category `j`'s representation for predicting
/// any other category `i != j`. Zero when there is a single category.
pub fn loss_iloss(y_hat: ArrayView2<f64>) -> f64 {
    let n = y_hat.nrows();
    if n < 2 {
        return 0.0;
    }
    let mut sum = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                sum += (1.0 - clamp(y_hat[[j, i]])).ln();
            }
        }
    }
    -sum / (n - 1) as f64
}

/// Negative log-likelihood of the gold polarity, summed over the mentioned
/// categories (`Some` entries of `gold`).
pub fn loss_acsa(y_hat: ArrayView2<f64>, gold: &[Option<usize>]) -> f64 {
    let mut any = false;
    let mut sum = 0.0;
    for (j, g) in gold.iter().enumerate() {
        if let Some(c) = *g {
            any = true;
            sum -= clamp(y_hat[[j, c]]).ln();
        }
    }
    if !any {
        log::warn!("sentiment loss over an example with no mentioned category");
    }
    sum
}

/// Weights of the combined objective.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub acd: f64,
    pub iloss: f64,
    pub acsa: f64,
    pub l2: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights {
            acd: 1.0,
            iloss: 1.0,
            acsa: 1.0,
            l2: 1e-5,
        }
    }
}

pub fn total_loss(
    l_acd: f64,
    l_iloss: f64,
    l_acsa: f64,
    params: &ModelParams,
    weights: &LossWeights,
) -> f64 {
    weights.acd * l_acd
        + weights.iloss * l_iloss
        + weights.acsa * l_acsa
        + weights.l2 * params.squared_norm()
}

/// Gradient of `acd_weight * loss_acd + iloss_weight * loss_iloss` with
/// respect to `y_hat`.
pub(crate) fn detection_grad(
    y_hat: ArrayView2<f64>,
    gold: ArrayView1<f64>,
    acd_weight: f64,
    iloss_weight: f64,
) -> Array2<f64> {
    let n = y_hat.nrows();
    let mut g = Array2::zeros((n, n));
    for j in 0..n {
        let p = y_hat[[j, j]];
        g[[j, j]] = -acd_weight * (gold[j] * dlog(p) + (1.0 - gold[j]) * dlog1m(p));
        if n > 1 {
            let scale = iloss_weight / (n - 1) as f64;
            for i in (0..n).filter(|&i| i != j) {
                g[[j, i]] = -scale * dlog1m(y_hat[[j, i]]);
            }
        }
    }
    g
}

pub(crate) fn sentiment_grad(
    y_hat: ArrayView2<f64>,
    gold: &[Option<usize>],
    weight: f64,
) -> Array2<f64> {
    let mut g = Array2::zeros(y_hat.raw_dim());
    for (j, c) in gold.iter().enumerate() {
        if let Some(c) = *c {
            g[[j, c]] = -weight * dlog(y_hat[[j, c]]);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn detection_loss_fixed_cases() {
        let y = array![[0.5, 0.3], [0.8, 0.5]];
        let l = loss_acd(y.view(), array![1.0, 0.0].view());
        assert!((l - 2.0 * 2f64.ln()).abs() < 1e-12);
        let l = loss_acd(array![[0.9]].view(), array![1.0].view());
        assert!((l - 0.105_360_515_657_826_3).abs() < 1e-12);
        let perfect = loss_acd(array![[1.0, 0.2], [0.7, 0.0]].view(), array![1.0, 0.0].view());
        assert!(perfect < 1e-11);
    }

    #[test]
    fn interactive_loss_fixed_cases() {
        let y = array![[0.9, 0.5, 0.5], [0.5, 0.1, 0.5], [0.5, 0.5, 0.3]];
        assert!((loss_iloss(y.view()) - 3.0 * 2f64.ln()).abs() < 1e-12);
        let y = array![[0.7, 0.2], [0.9, 0.4]];
        let expected = -(0.8f64.ln() + 0.1f64.ln());
        assert!((loss_iloss(y.view()) - expected).abs() < 1e-12);
        assert!((expected - 2.525_728_644_308_255).abs() < 1e-12);
        assert_eq!(loss_iloss(array![[0.4]].view()), 0.0);
        assert!(loss_iloss(array![[0.4, 0.0], [0.0, 0.9]].view()) < 1e-11);
    }

    #[test]
    fn sentiment_loss_fixed_cases() {
        let y = array![[1.0, 0.0, 0.0]];
        assert!(loss_acsa(y.view(), &[Some(0)]) < 1e-11);
        let third = 1.0 / 3.0;
        let y = array![[third, third, third]];
        assert!((loss_acsa(y.view(), &[Some(2)]) - 3f64.ln()).abs() < 1e-12);
        let y = array![[0.7, 0.2, 0.1], [0.3, 0.4, 0.3], [0.2, 0.2, 0.6]];
        let l = loss_acsa(y.view(), &[Some(0), Some(1), None]);
        assert!((l - 1.272_965_675_812_261_3).abs() < 1e-12);
        assert_eq!(loss_acsa(y.view(), &[None, None, None]), 0.0);
    }

    #[test]
    fn total_of_zeros_is_zero() {
        let cfg = crate::model::ModelConfig {
            vocab_size: 3,
            dim: 4,
            heads: 2,
            num_categories: 2,
            num_polarities: 3,
            leaky_slope: 0.2,
        };
        let p = ModelParams::zeros(&cfg);
        assert_eq!(total_loss(0.0, 0.0, 0.0, &p, &LossWeights::default()), 0.0);
    }
}
