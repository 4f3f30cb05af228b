//! Every example runs to completion and shows what it claims.

#[path = "../examples/ap_basic.rs"]
mod ap_basic;
#[path = "../examples/eap_half_moons.rs"]
mod eap_half_moons;
#[path = "../examples/evaluate.rs"]
mod evaluate;
#[path = "../examples/local_view.rs"]
mod local_view;
#[path = "../examples/parameter_sweep.rs"]
mod parameter_sweep;
#[path = "../examples/shape_layers.rs"]
mod shape_layers;
#[path = "../examples/suggest_parameters.rs"]
mod suggest_parameters;

#[test]
fn ap_basic_finds_three_blobs() {
    let r = ap_basic::run_example().unwrap();
    assert_eq!(r.n_clusters, 3);
    assert_eq!(r.exemplars.len(), 3);
    assert_eq!(r.accuracy, 1.0);
}

#[test]
fn eap_separates_the_moons() {
    let r = eap_half_moons::run_example().unwrap();
    assert_eq!(r.n_clusters, 2);
    assert!(r.n_local_exemplars > 2);
    assert_eq!(r.accuracy, 1.0);
}

#[test]
fn shape_merges_potential_exemplars() {
    let r = shape_layers::run_example().unwrap();
    assert!(r.layer2_exemplars < r.layer1_exemplars);
    assert_eq!(r.n_clusters, 2);
    assert_eq!(r.accuracy, 1.0);
}

#[test]
fn local_view_prunes_the_bridge() {
    let r = local_view::run_example().unwrap();
    assert_eq!((r.clusters_before, r.clusters_after), (1, 2));
    assert_eq!(r.weakest_pair.map(|(_, n)| n), Some(1));
}

#[test]
fn evaluate_scores() {
    let (split, overlap) = evaluate::run_example().unwrap();
    // best column per true cluster covers 2 of 4 and 2 of 2 points
    assert!((split.sn - 4.0 / 6.0).abs() < 1e-12);
    assert_eq!(split.ppv, 1.0);
    assert!(overlap.accuracy > 0.0 && overlap.accuracy <= 1.0);
}

#[test]
fn suggested_epsilon_shrinks_neighborhoods() {
    let rows = suggest_parameters::run_example().unwrap();
    assert!(rows
        .windows(2)
        .all(|w| w[0].1 <= w[1].1 && w[0].2 >= w[1].2));
    assert_eq!(rows.last().unwrap().2, 1.0);
}

#[test]
fn sweep_reports_overflow_and_keeps_best() {
    let r = parameter_sweep::run_example().unwrap();
    assert_eq!(r.rows, 9);
    assert!(r.overflowed > 0 && r.overflowed < r.rows);
    assert_eq!(r.n_clusters, 2);
    assert_eq!(r.best_accuracy, 1.0);
}
