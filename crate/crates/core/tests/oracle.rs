mod common;

use common::checks;

const TOL: f64 = 1e-9;

#[test]
fn losses_match_scalar_recomputation() {
    let [acd, iloss, acsa, total] = checks::loss_errors(100, 11);
    assert!(acd <= TOL, "acd {acd:e}");
    assert!(iloss <= TOL, "iloss {iloss:e}");
    assert!(acsa <= TOL, "acsa {acsa:e}");
    assert!(total <= TOL, "total {total:e}");
}

#[test]
fn hand_computed_losses() {
    for (name, got, want) in checks::fixed_loss_cases() {
        assert!((got - want).abs() <= TOL, "{name}: {got} vs {want}");
    }
}

#[test]
fn layers_match_scalar_recomputation() {
    let [gat, att, acd, acsa] = checks::layer_errors(100, 12);
    assert!(gat <= TOL, "gat {gat:e}");
    assert!(att <= TOL, "attention {att:e}");
    assert!(acd <= TOL, "acd head {acd:e}");
    assert!(acsa <= TOL, "acsa head {acsa:e}");
}

#[test]
fn graphs_match_leaf_descendant_walk() {
    assert_eq!(checks::graph_mismatches(200, 13), 0);
}
