//! Library-versus-oracle comparisons shared by the oracle tests and the
//! acceptance report. Each returns the largest discrepancy it saw.

use ndarray::{Array1, Array2, Array3};
use rand::Rng;
use scan_core::model::{
    acd_predict, acsa_predict, aspect_attention, gat_layer, loss_acd, loss_acsa, loss_iloss,
    total_loss, AcdHeadParams, AcsaHeadParams, AttentionParams, GatParams, LossWeights,
};
use scan_core::treebank::{tree_to_graph, GraphOptions};

use super::oracle::{self, Mat};
use super::toy_model;

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn flat(m: &Mat) -> Vec<f64> {
    m.iter().flatten().copied().collect()
}

/// Probability matrix with entries in (0, 1), occasionally pushed to the
/// clamp boundary.
fn rand_probs(r: &mut rand_chacha::ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| match r.gen_range(0..20) {
                    0 => 1e-15,
                    1 => 1.0 - 1e-15,
                    _ => r.gen_range(0.001..0.999),
                })
                .collect()
        })
        .collect()
}

/// Max absolute error of the three losses and the combined objective over
/// `instances` random cases.
pub fn loss_errors(instances: usize, seed: u64) -> [f64; 4] {
    let mut r = oracle::rng(seed);
    let mut worst = [0.0f64; 4];
    let model = toy_model(seed);
    let norm: f64 = model
        .params
        .tensors()
        .iter()
        .flat_map(|(_, t)| t.iter())
        .map(|x| x * x)
        .sum();
    for _ in 0..instances {
        let n = r.gen_range(1..=6);
        let m = r.gen_range(2..=4);
        let y_acd = rand_probs(&mut r, n, n);
        let gold: Vec<f64> = (0..n).map(|_| f64::from(u8::from(r.gen_bool(0.5)))).collect();
        let mut y_acsa = Vec::new();
        for _ in 0..n {
            let raw: Vec<f64> = (0..m).map(|_| r.gen_range(0.01..1.0)).collect();
            let s: f64 = raw.iter().sum();
            y_acsa.push(raw.iter().map(|x| x / s).collect::<Vec<f64>>());
        }
        let sentiment: Vec<Option<usize>> = (0..n)
            .map(|_| r.gen_bool(0.6).then(|| r.gen_range(0..m)))
            .collect();

        let acd_nd = oracle::to_nd(&y_acd);
        let acsa_nd = oracle::to_nd(&y_acsa);
        let l_acd = loss_acd(acd_nd.view(), Array1::from(gold.clone()).view());
        let l_il = loss_iloss(acd_nd.view());
        let l_acsa = loss_acsa(acsa_nd.view(), &sentiment);
        let o_acd = oracle::loss_acd(&y_acd, &gold);
        let o_il = oracle::loss_iloss(&y_acd);
        let o_acsa = oracle::loss_acsa(&y_acsa, &sentiment);

        let w = LossWeights {
            acd: r.gen_range(0.0..2.0),
            iloss: r.gen_range(0.0..2.0),
            acsa: r.gen_range(0.0..2.0),
            l2: r.gen_range(0.0..1e-3),
        };
        let tot = total_loss(l_acd, l_il, l_acsa, &model.params, &w);
        let o_tot = oracle::total([o_acd, o_il, o_acsa], [w.acd, w.iloss, w.acsa, w.l2], norm);

        for (k, (a, b)) in [(l_acd, o_acd), (l_il, o_il), (l_acsa, o_acsa), (tot, o_tot)]
            .into_iter()
            .enumerate()
        {
            worst[k] = worst[k].max((a - b).abs());
        }
    }
    worst
}

/// The hand-computed loss values: (name, library value, expected).
pub fn fixed_loss_cases() -> Vec<(&'static str, f64, f64)> {
    let ln2 = std::f64::consts::LN_2;
    let d2 = ndarray::arr2(&[[0.5, 0.7], [0.3, 0.5]]);
    let half3 = Array2::from_elem((3, 3), 0.5);
    let pair = ndarray::arr2(&[[0.6, 0.2], [0.9, 0.4]]);
    let single = ndarray::arr2(&[[0.9]]);
    let uniform = Array2::from_elem((1, 3), 1.0 / 3.0);
    let two = ndarray::arr2(&[[0.7, 0.2, 0.1], [0.3, 0.4, 0.3]]);
    let model = toy_model(0);
    let mut zero = model.params.clone();
    zero.fill(0.0);
    vec![
        ("acd 2*ln2", loss_acd(d2.view(), ndarray::arr1(&[1.0, 0.0]).view()), 2.0 * ln2),
        ("acd -ln0.9", loss_acd(single.view(), ndarray::arr1(&[1.0]).view()), -(0.9f64).ln()),
        ("iloss 3*ln2", loss_iloss(half3.view()), 3.0 * ln2),
        ("iloss -(ln0.8+ln0.1)", loss_iloss(pair.view()), -((0.8f64).ln() + (0.1f64).ln())),
        ("acsa ln3", loss_acsa(uniform.view(), &[Some(1)]), (3.0f64).ln()),
        ("acsa -(ln0.7+ln0.4)", loss_acsa(two.view(), &[Some(0), Some(1)]), -((0.7f64).ln() + (0.4f64).ln())),
        ("total zero", total_loss(0.0, 0.0, 0.0, &zero, &LossWeights::default()), 0.0),
    ]
}

/// Max absolute error of graph attention, category attention and both
/// prediction heads over `instances` random cases.
pub fn layer_errors(instances: usize, seed: u64) -> [f64; 4] {
    let mut r = oracle::rng(seed);
    let mut worst = [0.0f64; 4];
    for _ in 0..instances {
        let heads = r.gen_range(1..=3);
        let d = heads * r.gen_range(1..=3);
        let n_cat = r.gen_range(1..=4);
        let m = r.gen_range(2..=4);
        let slope = 0.2;
        let tree = oracle::rand_tree(&mut r, 8, 4);
        let graph = tree_to_graph(&tree, GraphOptions { keep_preterminals: r.gen_bool(0.5) }).unwrap();
        let h = oracle::rand_mat(&mut r, graph.n(), d, 1.0);
        let w = oracle::rand_mat(&mut r, d, d, 1.0);
        let a = oracle::rand_mat(&mut r, heads, 2 * (d / heads), 1.0);
        let p = GatParams { w: oracle::to_nd(&w), a: oracle::to_nd(&a) };
        let got = gat_layer(&oracle::to_nd(&h), &graph, &p, slope).unwrap();
        let want = oracle::gat(&h, &oracle::neighbor_lists(&graph), &w, &a, slope);
        worst[0] = worst[0].max(max_abs_diff(&flat(&oracle::from_nd(&got)), &flat(&want)));

        let g = want;
        let att_w: Vec<Mat> = (0..n_cat).map(|_| oracle::rand_mat(&mut r, d, d, 1.0)).collect();
        let att_b = oracle::rand_mat(&mut r, n_cat, d, 1.0);
        let att_u = oracle::rand_mat(&mut r, n_cat, d, 1.0);
        let att = AttentionParams {
            w: Array3::from_shape_fn((n_cat, d, d), |(j, x, y)| att_w[j][x][y]),
            b: oracle::to_nd(&att_b),
            u: oracle::to_nd(&att_u),
        };
        let acd_w = oracle::rand_mat(&mut r, n_cat, d, 1.0);
        let acd_b = oracle::rand_vec(&mut r, n_cat, 1.0);
        let acd_p = AcdHeadParams { w: oracle::to_nd(&acd_w), b: Array1::from(acd_b.clone()) };
        let w1 = oracle::rand_mat(&mut r, d, d, 1.0);
        let w2 = oracle::rand_mat(&mut r, m, d, 1.0);
        let b1 = oracle::rand_mat(&mut r, n_cat, d, 1.0);
        let b2 = oracle::rand_mat(&mut r, n_cat, m, 1.0);
        let acsa_p = AcsaHeadParams {
            w1: oracle::to_nd(&w1),
            w2: oracle::to_nd(&w2),
            b1: oracle::to_nd(&b1),
            b2: oracle::to_nd(&b2),
        };
        let g_nd = oracle::to_nd(&g);
        for j in 0..n_cat {
            let beta = aspect_attention(&g_nd, j, &att, None).unwrap();
            let o_beta = oracle::attention(&g, &att_w[j], &att_b[j], &att_u[j]);
            worst[1] = worst[1].max(max_abs_diff(beta.as_slice().unwrap(), &o_beta));
            let (_, y) = acd_predict(&g_nd, &beta, &acd_p);
            let o_y = oracle::acd(&g, &o_beta, &acd_w, &acd_b);
            worst[2] = worst[2].max(max_abs_diff(y.as_slice().unwrap(), &o_y));
            let s = acsa_predict(&g_nd, &beta, j, &acsa_p);
            let o_s = oracle::acsa(&g, &o_beta, &w1, &b1[j], &w2, &b2[j]);
            worst[3] = worst[3].max(max_abs_diff(s.as_slice().unwrap(), &o_s));
        }
    }
    worst
}

/// Number of random trees (out of `count`) whose graph differs from the
/// leaf-descendant oracle under either preterminal setting.
pub fn graph_mismatches(count: usize, seed: u64) -> usize {
    let mut r = oracle::rng(seed);
    let mut bad = 0;
    for _ in 0..count {
        let tree = oracle::rand_tree(&mut r, 12, 4);
        for keep in [false, true] {
            let g = tree_to_graph(&tree, GraphOptions { keep_preterminals: keep }).unwrap();
            let (tokens, sets) = oracle::graph_oracle(&tree, keep);
            let got_tokens: Vec<String> = g.tokens().iter().map(|t| t.to_string()).collect();
            let mut got: Vec<Vec<usize>> = oracle::neighbor_lists(&g);
            got.iter_mut().for_each(|s| s.sort_unstable());
            let edges = sets.iter().map(Vec::len).sum::<usize>();
            if got_tokens != tokens || got != sets || g.edge_count() != edges {
                bad += 1;
                break;
            }
        }
    }
    bad
}
