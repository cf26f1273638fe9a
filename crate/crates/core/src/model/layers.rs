//! Network layers with hand-written backward passes.
//!
//! Every `*_forward` returns its output together with a cache that the
//! matching `*_backward` consumes. Backward functions accumulate parameter
//! gradients into a caller-owned buffer and return the gradient with respect
//! to their input.

use ndarray::linalg::general_mat_mul;
use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2, Axis};

use super::params::{AcdHeadParams, AcsaHeadParams, AttentionParams, GatParams, LstmParams};
use crate::error::{Error, Result};
use crate::treebank::ConstituencyGraph;

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn leaky_relu(x: f64, slope: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        slope * x
    }
}

/// Numerically stable softmax.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let sum: f64 = out.iter().sum();
    out.iter_mut().for_each(|x| *x /= sum);
    out
}

/// Gradient of the softmax input given its output `p` and the gradient `dp`
/// of its output.
fn softmax_backward(p: &[f64], dp: &[f64]) -> Vec<f64> {
    let dot: f64 = p.iter().zip(dp).map(|(a, b)| a * b).sum();
    p.iter().zip(dp).map(|(pi, di)| pi * (di - dot)).collect()
}

/// Looks up one embedding row per token.
pub fn embed(token_ids: &[usize], embedding: &Array2<f64>) -> Result<Array2<f64>> {
    let vocab = embedding.nrows();
    if let Some(&bad) = token_ids.iter().find(|&&id| id >= vocab) {
        return Err(Error::Shape(format!(
            "token id {bad} outside a vocabulary of {vocab}"
        )));
    }
    Ok(embedding.select(Axis(0), token_ids))
}

pub(crate) struct LstmCache {
    x: Array2<f64>,
    /// Activated gates, blocks ordered input, forget, cell, output.
    gates: Array2<f64>,
    c: Array2<f64>,
    tanh_c: Array2<f64>,
    h: Array2<f64>,
}

/// Unidirectional LSTM over the rows of `x`; returns the hidden states.
pub fn encode(x: &Array2<f64>, p: &LstmParams) -> Result<Array2<f64>> {
    lstm_forward(x.clone(), p).map(|(h, _)| h)
}

pub(crate) fn lstm_forward(x: Array2<f64>, p: &LstmParams) -> Result<(Array2<f64>, LstmCache)> {
    let t_len = x.nrows();
    if t_len == 0 {
        return Err(Error::Precondition("cannot encode an empty sequence".into()));
    }
    let d = p.w_hh.ncols();
    if x.ncols() != p.w_ih.ncols() {
        return Err(Error::Shape(format!(
            "input width {} does not match encoder width {}",
            x.ncols(),
            p.w_ih.ncols()
        )));
    }
    let mut gates = x.dot(&p.w_ih.t()) + &p.bias;
    let mut c = Array2::zeros((t_len, d));
    let mut tanh_c = Array2::zeros((t_len, d));
    let mut h = Array2::<f64>::zeros((t_len, d));
    for t in 0..t_len {
        if t > 0 {
            let rec = p.w_hh.dot(&h.row(t - 1));
            let mut z = gates.row_mut(t);
            z += &rec;
        }
        let mut z = gates.row_mut(t);
        for k in 0..d {
            z[k] = sigmoid(z[k]);
            z[d + k] = sigmoid(z[d + k]);
            z[2 * d + k] = z[2 * d + k].tanh();
            z[3 * d + k] = sigmoid(z[3 * d + k]);
        }
        for k in 0..d {
            let prev = if t > 0 { c[[t - 1, k]] } else { 0.0 };
            let ct = z[d + k] * prev + z[k] * z[2 * d + k];
            c[[t, k]] = ct;
            tanh_c[[t, k]] = ct.tanh();
            h[[t, k]] = z[3 * d + k] * tanh_c[[t, k]];
        }
    }
    let cache = LstmCache {
        x,
        gates,
        c,
        tanh_c,
        h: h.clone(),
    };
    Ok((h, cache))
}

pub(crate) fn lstm_backward(
    cache: &LstmCache,
    dh_out: &Array2<f64>,
    p: &LstmParams,
    grad: &mut LstmParams,
) -> Array2<f64> {
    let (t_len, d) = cache.h.dim();
    let mut dz = Array2::<f64>::zeros((t_len, 4 * d));
    let mut dh_next = Array1::<f64>::zeros(d);
    let mut dc_next = Array1::<f64>::zeros(d);
    for t in (0..t_len).rev() {
        let g = cache.gates.row(t);
        let mut dzt = dz.row_mut(t);
        for k in 0..d {
            let (i, f, gg, o) = (g[k], g[d + k], g[2 * d + k], g[3 * d + k]);
            let th = cache.tanh_c[[t, k]];
            let dh = dh_out[[t, k]] + dh_next[k];
            let d_o = dh * th;
            let dc = dh * o * (1.0 - th * th) + dc_next[k];
            let prev = if t > 0 { cache.c[[t - 1, k]] } else { 0.0 };
            dzt[k] = dc * gg * i * (1.0 - i);
            dzt[d + k] = dc * prev * f * (1.0 - f);
            dzt[2 * d + k] = dc * i * (1.0 - gg * gg);
            dzt[3 * d + k] = d_o * o * (1.0 - o);
            dc_next[k] = dc * f;
        }
        dh_next = p.w_hh.t().dot(&dz.row(t));
    }
    general_mat_mul(1.0, &dz.t(), &cache.x, 1.0, &mut grad.w_ih);
    if t_len > 1 {
        general_mat_mul(
            1.0,
            &dz.slice(s![1.., ..]).t(),
            &cache.h.slice(s![..t_len - 1, ..]),
            1.0,
            &mut grad.w_hh,
        );
    }
    grad.bias += &dz.sum_axis(Axis(0));
    dz.dot(&p.w_ih)
}

/// Attention coefficients of one node over its neighbours for one head:
/// softmax over `LeakyReLU(a^T [W h_i || W h_j])`.
pub fn gat_coefficients(
    h_i: ArrayView1<f64>,
    neighbor_states: ArrayView2<f64>,
    w_head: ArrayView2<f64>,
    a_head: ArrayView1<f64>,
    slope: f64,
) -> Result<Vec<f64>> {
    if neighbor_states.nrows() == 0 {
        return Err(Error::Precondition(
            "graph attention over an empty neighbour set".into(),
        ));
    }
    let dh = w_head.nrows();
    let target = w_head.dot(&h_i);
    let self_score = a_head.slice(s![..dh]).dot(&target);
    let a_src = a_head.slice(s![dh..]);
    let scores: Vec<f64> = neighbor_states
        .rows()
        .into_iter()
        .map(|h_j| leaky_relu(self_score + a_src.dot(&w_head.dot(&h_j)), slope))
        .collect();
    Ok(softmax(&scores))
}

pub(crate) struct GatCache {
    h: Array2<f64>,
    /// Leaf states projected by every head, `n x d`.
    proj: Array2<f64>,
    /// Sigmoid outputs, `(n+m) x d`.
    out: Array2<f64>,
    /// Pre-activation scores, `[node][head][neighbour]`.
    raw: Vec<Vec<Vec<f64>>>,
    pub(crate) alpha: Vec<Vec<Vec<f64>>>,
}

/// One graph-attention layer over the leaf-sourced graph. Row `i` of the
/// output concatenates, over heads, `sigmoid(sum_j alpha_ij W_l h_j)`.
/// Internal nodes have a zero own state.
pub fn gat_layer(
    h: &Array2<f64>,
    graph: &ConstituencyGraph,
    p: &GatParams,
    slope: f64,
) -> Result<Array2<f64>> {
    gat_forward(h.clone(), graph, p, slope).map(|(out, _)| out)
}

pub(crate) fn gat_forward(
    h: Array2<f64>,
    graph: &ConstituencyGraph,
    p: &GatParams,
    slope: f64,
) -> Result<(Array2<f64>, GatCache)> {
    let n = graph.n();
    if h.nrows() != n {
        return Err(Error::Shape(format!(
            "{} hidden states for a graph with {n} leaves",
            h.nrows()
        )));
    }
    let heads = p.heads();
    let dh = p.head_dim();
    let d = p.w.nrows();
    let k_nodes = graph.num_nodes();
    let proj = h.dot(&p.w.t());

    // Per-leaf contribution of the source half of each head's context.
    let mut src_score = Array2::<f64>::zeros((n, heads));
    let mut tgt_score = Array2::<f64>::zeros((n, heads));
    for l in 0..heads {
        let block = proj.slice(s![.., l * dh..(l + 1) * dh]);
        let a = p.a.row(l);
        src_score.column_mut(l).assign(&block.dot(&a.slice(s![dh..])));
        tgt_score.column_mut(l).assign(&block.dot(&a.slice(s![..dh])));
    }

    let mut out = Array2::<f64>::zeros((k_nodes, d));
    let mut raw = Vec::with_capacity(k_nodes);
    let mut alpha = Vec::with_capacity(k_nodes);
    for node in 0..k_nodes {
        let nbrs = graph.neighbors(node);
        if nbrs.is_empty() {
            return Err(Error::Precondition(format!(
                "node {node} has an empty neighbour set"
            )));
        }
        let mut node_raw = Vec::with_capacity(heads);
        let mut node_alpha = Vec::with_capacity(heads);
        for l in 0..heads {
            let own = if graph.is_leaf(node) {
                tgt_score[[node, l]]
            } else {
                0.0
            };
            let r: Vec<f64> = nbrs.iter().map(|&j| own + src_score[[j, l]]).collect();
            let e: Vec<f64> = r.iter().map(|&x| leaky_relu(x, slope)).collect();
            let a = softmax(&e);
            let mut o = out.slice_mut(s![node, l * dh..(l + 1) * dh]);
            for (&j, &w) in nbrs.iter().zip(&a) {
                o.scaled_add(w, &proj.slice(s![j, l * dh..(l + 1) * dh]));
            }
            o.mapv_inplace(sigmoid);
            node_raw.push(r);
            node_alpha.push(a);
        }
        raw.push(node_raw);
        alpha.push(node_alpha);
    }
    let cache = GatCache {
        h,
        proj,
        out: out.clone(),
        raw,
        alpha,
    };
    Ok((out, cache))
}

pub(crate) fn gat_backward(
    cache: &GatCache,
    graph: &ConstituencyGraph,
    dout: &Array2<f64>,
    p: &GatParams,
    grad: &mut GatParams,
    slope: f64,
) -> Array2<f64> {
    let heads = p.heads();
    let dh = p.head_dim();
    let mut dproj = Array2::<f64>::zeros(cache.proj.raw_dim());
    let mut dagg = vec![0.0; dh];
    for node in 0..graph.num_nodes() {
        let nbrs = graph.neighbors(node);
        let leaf = graph.is_leaf(node);
        for l in 0..heads {
            let cols = l * dh..(l + 1) * dh;
            for (k, c) in cols.clone().enumerate() {
                let y = cache.out[[node, c]];
                dagg[k] = dout[[node, c]] * y * (1.0 - y);
            }
            let alpha = &cache.alpha[node][l];
            let dalpha: Vec<f64> = nbrs
                .iter()
                .map(|&j| {
                    cols.clone()
                        .zip(&dagg)
                        .map(|(c, g)| cache.proj[[j, c]] * g)
                        .sum()
                })
                .collect();
            for (&j, &w) in nbrs.iter().zip(alpha) {
                for (c, g) in cols.clone().zip(&dagg) {
                    dproj[[j, c]] += w * g;
                }
            }
            if nbrs.len() == 1 {
                // softmax over a singleton is constant
                continue;
            }
            let de = softmax_backward(alpha, &dalpha);
            let a_tgt = p.a.slice(s![l, ..dh]);
            let a_src = p.a.slice(s![l, dh..]);
            for ((&j, &r), g) in nbrs.iter().zip(&cache.raw[node][l]).zip(de) {
                let ds = if r > 0.0 { g } else { slope * g };
                for (k, c) in cols.clone().enumerate() {
                    grad.a[[l, dh + k]] += ds * cache.proj[[j, c]];
                    dproj[[j, c]] += ds * a_src[k];
                    if leaf {
                        grad.a[[l, k]] += ds * cache.proj[[node, c]];
                        dproj[[node, c]] += ds * a_tgt[k];
                    }
                }
            }
        }
    }
    general_mat_mul(1.0, &dproj.t(), &cache.h, 1.0, &mut grad.w);
    dproj.dot(&p.w)
}

/// Attention weights of category `j` over the rows of `g`. Rows whose mask
/// entry is false get exactly zero weight.
pub fn aspect_attention(
    g: &Array2<f64>,
    j: usize,
    p: &AttentionParams,
    node_mask: Option<&[bool]>,
) -> Result<Array1<f64>> {
    if j >= p.w.len_of(Axis(0)) {
        return Err(Error::Shape(format!("category index {j} out of range")));
    }
    if let Some(mask) = node_mask {
        if mask.len() != g.nrows() {
            return Err(Error::Shape(format!(
                "mask of length {} over {} nodes",
                mask.len(),
                g.nrows()
            )));
        }
    }
    let live: Vec<usize> = (0..g.nrows())
        .filter(|&i| node_mask.is_none_or(|m| m[i]))
        .collect();
    if live.is_empty() {
        return Err(Error::Precondition("every node is masked".into()));
    }
    let scores = attention_scores(&g.select(Axis(0), &live), j, p).0;
    let weights = softmax(scores.as_slice().unwrap());
    let mut beta = Array1::zeros(g.nrows());
    for (&i, w) in live.iter().zip(weights) {
        beta[i] = w;
    }
    Ok(beta)
}

/// Returns `u_j^T tanh(W_j g_k + b_j)` for every row `k` and the tanh
/// activations.
fn attention_scores(g: &Array2<f64>, j: usize, p: &AttentionParams) -> (Array1<f64>, Array2<f64>) {
    let mut t = g.dot(&p.w.index_axis(Axis(0), j).t()) + p.b.row(j);
    t.mapv_inplace(f64::tanh);
    (t.dot(&p.u.row(j)), t)
}

pub(crate) struct AttentionCache {
    tanh: Vec<Array2<f64>>,
    pub(crate) beta: Array2<f64>,
}

/// Attention of every category over every row of `g`; `N x K`.
pub(crate) fn attention_forward(g: &Array2<f64>, p: &AttentionParams) -> AttentionCache {
    let n_cat = p.w.len_of(Axis(0));
    let mut beta = Array2::zeros((n_cat, g.nrows()));
    let mut tanh = Vec::with_capacity(n_cat);
    for j in 0..n_cat {
        let (scores, t) = attention_scores(g, j, p);
        beta.row_mut(j)
            .assign(&Array1::from(softmax(scores.as_slice().unwrap())));
        tanh.push(t);
    }
    AttentionCache { tanh, beta }
}

/// Backward through the attention given `dbeta` (`N x K`); returns the
/// gradient with respect to `g`.
pub(crate) fn attention_backward(
    cache: &AttentionCache,
    g: &Array2<f64>,
    dbeta: &Array2<f64>,
    p: &AttentionParams,
    grad: &mut AttentionParams,
) -> Array2<f64> {
    let mut dg = Array2::zeros(g.raw_dim());
    for (j, t) in cache.tanh.iter().enumerate() {
        let beta = cache.beta.row(j);
        let dscore = Array1::from(softmax_backward(
            beta.as_slice().unwrap(),
            dbeta.row(j).to_vec().as_slice(),
        ));
        let mut gu = grad.u.row_mut(j);
        gu += &t.t().dot(&dscore);
        // dZ = (dscore u_j^T) * (1 - T^2)
        let u = p.u.row(j);
        let mut dz = t.mapv(|x| 1.0 - x * x);
        for (mut row, &ds) in dz.rows_mut().into_iter().zip(&dscore) {
            row *= &(&u * ds);
        }
        let mut gw = grad.w.index_axis_mut(Axis(0), j);
        general_mat_mul(1.0, &dz.t(), g, 1.0, &mut gw);
        let mut gb = grad.b.row_mut(j);
        gb += &dz.sum_axis(Axis(0));
        general_mat_mul(1.0, &dz, &p.w.index_axis(Axis(0), j), 1.0, &mut dg);
    }
    dg
}

/// Category representation `r_j = g^T beta_j` and the detection
/// probabilities `sigmoid(W_i r_j + b_i)` for every category `i`.
pub fn acd_predict(
    g: &Array2<f64>,
    beta_j: &Array1<f64>,
    p: &AcdHeadParams,
) -> (Array1<f64>, Array1<f64>) {
    let r = g.t().dot(beta_j);
    let y = (p.w.dot(&r) + &p.b).mapv(sigmoid);
    (r, y)
}

/// Sentiment distribution of category `j`:
/// `softmax(W2 relu(W1 (g^T beta_j) + b1_j) + b2_j)`.
pub fn acsa_predict(
    g: &Array2<f64>,
    beta_j: &Array1<f64>,
    j: usize,
    p: &AcsaHeadParams,
) -> Array1<f64> {
    let s = g.t().dot(beta_j);
    let z1 = (p.w1.dot(&s) + p.b1.row(j)).mapv(|x| x.max(0.0));
    let z2 = p.w2.dot(&z1) + p.b2.row(j);
    Array1::from(softmax(z2.as_slice().unwrap()))
}

pub(crate) struct HeadsCache {
    /// `beta g`, one row per category.
    r_acd: Array2<f64>,
    pub(crate) y_acd: Array2<f64>,
    s_acsa: Array2<f64>,
    z1: Array2<f64>,
    a1: Array2<f64>,
    pub(crate) y_acsa: Array2<f64>,
}

pub(crate) fn heads_forward(
    beta: &Array2<f64>,
    g_acd: &Array2<f64>,
    g_acsa: &Array2<f64>,
    acd: &AcdHeadParams,
    acsa: &AcsaHeadParams,
) -> HeadsCache {
    let r_acd = beta.dot(g_acd);
    let y_acd = (r_acd.dot(&acd.w.t()) + &acd.b).mapv(sigmoid);
    let s_acsa = beta.dot(g_acsa);
    let z1 = s_acsa.dot(&acsa.w1.t()) + &acsa.b1;
    let a1 = z1.mapv(|x| x.max(0.0));
    let z2 = a1.dot(&acsa.w2.t()) + &acsa.b2;
    let mut y_acsa = Array2::zeros(z2.raw_dim());
    for (mut dst, row) in y_acsa.rows_mut().into_iter().zip(z2.rows()) {
        dst.assign(&Array1::from(softmax(row.to_vec().as_slice())));
    }
    HeadsCache {
        r_acd,
        y_acd,
        s_acsa,
        z1,
        a1,
        y_acsa,
    }
}

pub(crate) struct HeadsGrad {
    pub dbeta: Array2<f64>,
    pub dg_acd: Array2<f64>,
    pub dg_acsa: Array2<f64>,
}

/// Backward through both heads given gradients with respect to their
/// probability outputs.
#[allow(clippy::too_many_arguments)]
pub(crate) fn heads_backward(
    cache: &HeadsCache,
    beta: &Array2<f64>,
    g_acd: &Array2<f64>,
    g_acsa: &Array2<f64>,
    dy_acd: &Array2<f64>,
    dy_acsa: &Array2<f64>,
    acd: &AcdHeadParams,
    acsa: &AcsaHeadParams,
    grad_acd: &mut AcdHeadParams,
    grad_acsa: &mut AcsaHeadParams,
) -> HeadsGrad {
    // detection
    let dlogit = dy_acd * &cache.y_acd.mapv(|y| y * (1.0 - y));
    general_mat_mul(1.0, &dlogit.t(), &cache.r_acd, 1.0, &mut grad_acd.w);
    grad_acd.b += &dlogit.sum_axis(Axis(0));
    let dr = dlogit.dot(&acd.w);
    let mut dbeta = dr.dot(&g_acd.t());
    let dg_acd = beta.t().dot(&dr);

    // sentiment
    let mut dz2 = Array2::zeros(cache.y_acsa.raw_dim());
    for ((mut dst, p), dp) in dz2
        .rows_mut()
        .into_iter()
        .zip(cache.y_acsa.rows())
        .zip(dy_acsa.rows())
    {
        let g = softmax_backward(p.to_vec().as_slice(), dp.to_vec().as_slice());
        dst.assign(&Array1::from(g));
    }
    general_mat_mul(1.0, &dz2.t(), &cache.a1, 1.0, &mut grad_acsa.w2);
    grad_acsa.b2 += &dz2;
    let mut dz1 = dz2.dot(&acsa.w2);
    dz1.zip_mut_with(&cache.z1, |g, &z| {
        if z <= 0.0 {
            *g = 0.0
        }
    });
    general_mat_mul(1.0, &dz1.t(), &cache.s_acsa, 1.0, &mut grad_acsa.w1);
    grad_acsa.b1 += &dz1;
    let ds = dz1.dot(&acsa.w1);
    general_mat_mul(1.0, &ds, &g_acsa.t(), 1.0, &mut dbeta);
    let dg_acsa = beta.t().dot(&ds);

    HeadsGrad {
        dbeta,
        dg_acd,
        dg_acsa,
    }
}
