//! EAP on two interleaved half moons, a shape a single exemplar per
//! cluster cannot describe.
//!
//! ```text
//! cargo run --release --example eap_half_moons
//! ```

use eapcluster::metrics::score_labels;
use eapcluster::{
    build_neighborhoods, decide, eap_run, gen_half_moons, similarity_from_points, suggest_epsilon,
    suggest_q, EngineParams, Result,
};

pub struct Summary {
    pub n_clusters: usize,
    pub n_local_exemplars: usize,
    pub accuracy: f64,
}

pub fn run_example() -> Result<Summary> {
    let points = gen_half_moons(400, 0.05, 0)?;
    let raw = similarity_from_points(&points, 0.0);
    let preference = raw.median_off_diagonal().unwrap();
    let s = raw.with_preference(preference);

    let q = suggest_q(&s, 95.0)?;
    let epsilon = suggest_epsilon(&s, 99.0)?;
    let nbr = build_neighborhoods(&s, epsilon);
    let params = EngineParams {
        preference,
        q,
        epsilon,
        ..Default::default()
    };
    println!("p = {preference:.3}, q = {q:.3}, epsilon = {epsilon:.3}");

    let (beliefs, status) = eap_run(&s, &nbr, &params)?;
    let res = decide(&s, &beliefs);
    let linked = res.exemplar_lists.iter().filter(|l| l.len() > 1).count();
    println!(
        "{} local exemplars, {linked} points linked to several of them, {} clusters ({} sweeps)",
        res.exemplars.len(),
        res.n_clusters(),
        status.iterations_run
    );
    let accuracy = score_labels(points.labels().unwrap(), &res.cluster_ids)?.accuracy;
    println!("accuracy {accuracy:.3}");
    Ok(Summary {
        n_clusters: res.n_clusters(),
        n_local_exemplars: res.exemplars.len(),
        accuracy,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
