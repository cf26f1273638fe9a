//! Straight-line scalar recomputations of the network equations, written
//! against plain vectors so they share no code with the library.

#![allow(clippy::needless_range_loop, clippy::manual_clamp)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scan_core::treebank::{ConstituencyGraph, ParseTree};

pub type Mat = Vec<Vec<f64>>;

const EPS: f64 = 1e-12;

fn clamp(p: f64) -> f64 {
    if p < EPS {
        EPS
    } else if p > 1.0 - EPS {
        1.0 - EPS
    } else {
        p
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn softmax(x: &[f64]) -> Vec<f64> {
    let mut m = f64::NEG_INFINITY;
    for &v in x {
        if v > m {
            m = v;
        }
    }
    let mut total = 0.0;
    let mut e = Vec::new();
    for &v in x {
        let t = (v - m).exp();
        e.push(t);
        total += t;
    }
    for v in e.iter_mut() {
        *v /= total;
    }
    e
}

fn matvec(w: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for row in w {
        let mut s = 0.0;
        for k in 0..x.len() {
            s += row[k] * x[k];
        }
        out.push(s);
    }
    out
}

/// Weighted sum of the rows of `g`: `sum_k beta[k] * g[k]`.
fn pool(g: &[Vec<f64>], beta: &[f64]) -> Vec<f64> {
    let d = g[0].len();
    let mut r = vec![0.0; d];
    for k in 0..g.len() {
        for c in 0..d {
            r[c] += beta[k] * g[k][c];
        }
    }
    r
}

/// Node-by-node graph attention. `w` is `d x d` with head `l` in rows
/// `l*dh..(l+1)*dh`; `a[l]` has the target half first.
pub fn gat(
    h: &[Vec<f64>],
    neighbors: &[Vec<usize>],
    w: &[Vec<f64>],
    a: &[Vec<f64>],
    slope: f64,
) -> Mat {
    let n = h.len();
    let d = w.len();
    let heads = a.len();
    let dh = d / heads;
    let mut out = Vec::new();
    for (i, nb) in neighbors.iter().enumerate() {
        let own = if i < n { h[i].clone() } else { vec![0.0; h[0].len()] };
        let mut row = Vec::new();
        for l in 0..heads {
            let wl: Vec<Vec<f64>> = w[l * dh..(l + 1) * dh].to_vec();
            let target = matvec(&wl, &own);
            let mut scores = Vec::new();
            let mut sources = Vec::new();
            for &j in nb {
                let src = matvec(&wl, &h[j]);
                let mut e = 0.0;
                for k in 0..dh {
                    e += a[l][k] * target[k] + a[l][dh + k] * src[k];
                }
                scores.push(if e > 0.0 { e } else { slope * e });
                sources.push(src);
            }
            let alpha = softmax(&scores);
            for k in 0..dh {
                let mut s = 0.0;
                for (q, src) in sources.iter().enumerate() {
                    s += alpha[q] * src[k];
                }
                row.push(sigmoid(s));
            }
        }
        out.push(row);
    }
    out
}

/// `beta_j = softmax(u^T tanh(W g_k + b))` over the rows of `g`.
pub fn attention(g: &[Vec<f64>], w: &[Vec<f64>], b: &[f64], u: &[f64]) -> Vec<f64> {
    let mut scores = Vec::new();
    for gk in g {
        let z = matvec(w, gk);
        let mut s = 0.0;
        for c in 0..z.len() {
            s += u[c] * (z[c] + b[c]).tanh();
        }
        scores.push(s);
    }
    softmax(&scores)
}

pub fn acd(g: &[Vec<f64>], beta: &[f64], w: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let r = pool(g, beta);
    let z = matvec(w, &r);
    (0..w.len()).map(|i| sigmoid(z[i] + b[i])).collect()
}

pub fn acsa(
    g: &[Vec<f64>],
    beta: &[f64],
    w1: &[Vec<f64>],
    b1: &[f64],
    w2: &[Vec<f64>],
    b2: &[f64],
) -> Vec<f64> {
    let s = pool(g, beta);
    let z1 = matvec(w1, &s);
    let a1: Vec<f64> = (0..z1.len()).map(|c| (z1[c] + b1[c]).max(0.0)).collect();
    let z2 = matvec(w2, &a1);
    let logits: Vec<f64> = (0..z2.len()).map(|c| z2[c] + b2[c]).collect();
    softmax(&logits)
}

pub fn loss_acd(y: &[Vec<f64>], gold: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..gold.len() {
        let p = clamp(y[j][j]);
        s -= gold[j] * p.ln() + (1.0 - gold[j]) * (1.0 - p).ln();
    }
    s
}

pub fn loss_iloss(y: &[Vec<f64>]) -> f64 {
    let n = y.len();
    if n == 1 {
        return 0.0;
    }
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s -= (1.0 - clamp(y[j][i])).ln();
            }
        }
    }
    s / (n as f64 - 1.0)
}

pub fn loss_acsa(y: &[Vec<f64>], gold: &[Option<usize>]) -> f64 {
    let mut s = 0.0;
    for j in 0..gold.len() {
        if let Some(c) = gold[j] {
            s -= clamp(y[j][c]).ln();
        }
    }
    s
}

pub fn total(parts: [f64; 3], weights: [f64; 4], squared_norm: f64) -> f64 {
    weights[0] * parts[0] + weights[1] * parts[1] + weights[2] * parts[2] + weights[3] * squared_norm
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_mat(r: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> Mat {
    (0..rows)
        .map(|_| (0..cols).map(|_| r.gen_range(-scale..scale)).collect())
        .collect()
}

pub fn rand_vec(r: &mut ChaCha8Rng, len: usize, scale: f64) -> Vec<f64> {
    (0..len).map(|_| r.gen_range(-scale..scale)).collect()
}

pub fn to_nd(m: &[Vec<f64>]) -> ndarray::Array2<f64> {
    let rows = m.len();
    let cols = m[0].len();
    ndarray::Array2::from_shape_fn((rows, cols), |(i, j)| m[i][j])
}

pub fn from_nd(a: &ndarray::Array2<f64>) -> Mat {
    a.rows().into_iter().map(|r| r.to_vec()).collect()
}

/// Random tree with at most `max_leaves` leaves and depth at most
/// `max_depth` (at least 1); leaves are `w0`, `w1`, ... in order and the
/// root is always an internal node.
pub fn rand_tree(r: &mut ChaCha8Rng, max_leaves: usize, max_depth: usize) -> ParseTree {
    fn node(r: &mut ChaCha8Rng, budget: usize, depth: usize, next: &mut usize) -> ParseTree {
        let k = r.gen_range(1..=budget.min(3));
        let mut left = budget;
        let mut children = Vec::new();
        for c in 0..k {
            let share = if c + 1 == k { left } else { r.gen_range(1..=left - (k - c - 1)) };
            left -= share;
            if depth == 1 || share == 1 && r.gen_bool(0.6) {
                // Out of depth: the remaining budget becomes flat words.
                for _ in 0..share {
                    children.push(ParseTree::leaf(format!("w{next}")));
                    *next += 1;
                }
            } else {
                children.push(node(r, share, depth - 1, next));
            }
        }
        let tags = ["S", "NP", "VP", "PP", "ADJP", "NN", "DT"];
        ParseTree::node(tags[r.gen_range(0..tags.len())], children)
    }
    let budget = r.gen_range(1..=max_leaves);
    node(r, budget, max_depth.max(1), &mut 0)
}

/// Neighbour lists of a graph as plain vectors.
pub fn neighbor_lists(g: &ConstituencyGraph) -> Vec<Vec<usize>> {
    (0..g.num_nodes()).map(|i| g.neighbors(i).to_vec()).collect()
}

/// Leaf-descendant oracle: returns the graph tokens and, for every node in
/// graph order, its sorted source set. Each internal node is matched to
/// its leaves by walking its subtree and looking the leaves up by address.
pub fn graph_oracle(tree: &ParseTree, keep_preterminals: bool) -> (Vec<String>, Vec<Vec<usize>>) {
    fn is_unit(t: &ParseTree, is_root: bool, keep: bool) -> bool {
        t.is_leaf() || (!keep && !is_root && t.children.len() == 1 && t.children[0].is_leaf())
    }
    fn units<'a>(t: &'a ParseTree, is_root: bool, keep: bool, out: &mut Vec<&'a ParseTree>) {
        if is_unit(t, is_root, keep) {
            out.push(t);
        } else {
            for c in &t.children {
                units(c, false, keep, out);
            }
        }
    }
    fn internals<'a>(t: &'a ParseTree, is_root: bool, keep: bool, out: &mut Vec<&'a ParseTree>) {
        if !is_unit(t, is_root, keep) {
            out.push(t);
            for c in &t.children {
                internals(c, false, keep, out);
            }
        }
    }
    let mut leaves = Vec::new();
    units(tree, true, keep_preterminals, &mut leaves);
    let mut inner = Vec::new();
    internals(tree, true, keep_preterminals, &mut inner);

    let tokens = leaves
        .iter()
        .map(|l| {
            let w = if l.is_leaf() { *l } else { &l.children[0] };
            w.token.clone().unwrap()
        })
        .collect();
    let mut sets: Vec<Vec<usize>> = (0..leaves.len()).map(|i| vec![i]).collect();
    for (k, v) in inner.iter().enumerate() {
        let mut below = Vec::new();
        units(v, k == 0, keep_preterminals, &mut below);
        let mut idx: Vec<usize> = below
            .iter()
            .map(|b| leaves.iter().position(|l| std::ptr::eq(*l, *b)).unwrap())
            .collect();
        idx.sort_unstable();
        sets.push(idx);
    }
    (tokens, sets)
}
