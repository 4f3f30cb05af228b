//! Plain Affinity Propagation on three Gaussian blobs.
//!
//! ```text
//! cargo run --example ap_basic
//! ```

use eapcluster::metrics::score_labels;
use eapcluster::{ap_decide, ap_run, gen_blobs, similarity_from_points, EngineParams, Result};

pub struct Summary {
    pub n_clusters: usize,
    pub exemplars: Vec<usize>,
    pub accuracy: f64,
}

pub fn run_example() -> Result<Summary> {
    let points = gen_blobs(
        40,
        &[[0.0, 0.0], [8.0, 0.0], [4.0, 7.0]],
        &[0.7, 0.7, 0.7],
        1,
    )?;
    // negative Euclidean distance; a low preference keeps exemplars few
    let s = similarity_from_points(&points, -40.0);
    let (beliefs, status) = ap_run(&s, &EngineParams::default())?;
    let res = ap_decide(&s, &beliefs);
    println!(
        "AP: {} clusters from {} points after {} sweeps (converged: {})",
        res.n_clusters(),
        points.len(),
        status.iterations_run,
        status.converged
    );
    for (c, members) in res.clusters().iter().enumerate() {
        println!("  cluster {c}: {} points", members.len());
    }
    let scores = score_labels(points.labels().unwrap(), &res.cluster_ids)?;
    println!("accuracy {:.3}", scores.accuracy);
    Ok(Summary {
        n_clusters: res.n_clusters(),
        exemplars: res.exemplars.clone(),
        accuracy: scores.accuracy,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
