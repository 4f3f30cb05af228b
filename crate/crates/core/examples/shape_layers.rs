//! SHAPE: a penalised first layer finds many potential exemplars, a second
//! AP layer merges the ones that sit close together.
//!
//! ```text
//! cargo run --release --example shape_layers
//! ```

use eapcluster::metrics::score_labels;
use eapcluster::{gen_half_moons, shape_run, similarity_from_points, EngineParams, Result};

pub struct Summary {
    pub layer1_exemplars: usize,
    pub layer2_exemplars: usize,
    pub n_clusters: usize,
    pub accuracy: f64,
}

pub fn run_example() -> Result<Summary> {
    let points = gen_half_moons(400, 0.05, 0)?;
    let s = similarity_from_points(&points, -1.0);
    let params = EngineParams {
        preference: -1.0,
        q: 0.2,
        p2: -3.0,
        ..Default::default()
    };
    let r = shape_run(&s, &params)?;

    println!("layer 1: {} potential exemplars", r.layer1.exemplars.len());
    println!(
        "layer 2: merged into {} exemplars",
        r.layer2.exemplars.len()
    );
    for &j in r.layer1.exemplars.iter().take(5) {
        println!("  point {j} -> exemplar {}", r.remap_of(j).unwrap());
    }
    let res = &r.final_result;
    let accuracy = score_labels(points.labels().unwrap(), &res.cluster_ids)?.accuracy;
    println!("{} clusters, accuracy {accuracy:.3}", res.n_clusters());
    Ok(Summary {
        layer1_exemplars: r.layer1.exemplars.len(),
        layer2_exemplars: r.layer2.exemplars.len(),
        n_clusters: res.n_clusters(),
        accuracy,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
