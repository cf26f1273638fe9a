mod common;

use common::{gradient_check, toy_batch, toy_model};
use scan_core::model::{LossWeights, Variant};
use scan_core::treebank::GraphOptions;

#[test]
fn analytic_gradients_match_central_differences() {
    for variant in Variant::ALL {
        for opts in [GraphOptions::default(), GraphOptions::keep_preterminals()] {
            let model = toy_model(17);
            let batch = toy_batch(opts);
            let weights = variant.adjust_weights(LossWeights::default());
            for g in gradient_check(&model, &batch, &weights, variant, 1e-5) {
                assert!(
                    g.max_rel < 1e-4,
                    "{variant} {opts:?}: {} rel error {}",
                    g.name,
                    g.max_rel
                );
            }
        }
    }
}

#[test]
fn every_parameter_group_receives_gradient() {
    let model = toy_model(5);
    let batch = toy_batch(GraphOptions::keep_preterminals());
    let (_, grad) = model
        .loss_and_grad(&batch, &LossWeights::default(), Variant::Full)
        .unwrap();
    for (name, g) in grad.tensors() {
        assert!(g.iter().any(|&x| x != 0.0), "{name} has an all-zero gradient");
    }
    // without the l2 term the target half of each GAT context vector is
    // still inert: leaves attend over a single source and internal nodes
    // carry a zero state
    let no_l2 = LossWeights {
        l2: 0.0,
        ..LossWeights::default()
    };
    let (_, grad) = model.loss_and_grad(&batch, &no_l2, Variant::Full).unwrap();
    let dh = grad.gat_acd.a.ncols() / 2;
    for gat in [&grad.gat_acd, &grad.gat_acsa] {
        assert!(gat.a.slice(ndarray::s![.., ..dh]).iter().all(|&x| x == 0.0));
        assert!(gat.a.slice(ndarray::s![.., dh..]).iter().any(|&x| x != 0.0));
    }
}
