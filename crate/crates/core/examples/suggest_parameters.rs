//! Starting values for q and epsilon from similarity percentiles, and the
//! neighborhood sizes they imply.
//!
//! ```text
//! cargo run --example suggest_parameters
//! ```

use eapcluster::{
    build_neighborhoods, gen_half_moons, similarity_from_points, suggest_epsilon, suggest_q, Result,
};

/// `(percentile, epsilon, mean neighborhood size)`.
pub fn run_example() -> Result<Vec<(f64, f64, f64)>> {
    let points = gen_half_moons(400, 0.05, 0)?;
    let s = similarity_from_points(&points, 0.0);
    println!("median similarity {:.3}", s.median_off_diagonal().unwrap());
    println!("q at the 95th percentile: {:.3}", suggest_q(&s, 95.0)?);
    let mut rows = Vec::new();
    for x in [95.0, 97.0, 99.0, 99.5, 100.0] {
        let eps = suggest_epsilon(&s, x)?;
        let nbr = build_neighborhoods(&s, eps);
        let mean = nbr.total_size() as f64 / nbr.n() as f64;
        println!("  X = {x:>5}: epsilon {eps:>7.3}, mean |neighborhood| {mean:.1}");
        rows.push((x, eps, mean));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
