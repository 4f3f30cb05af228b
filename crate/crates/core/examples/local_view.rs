//! Inside a cluster: exemplar counts per point, pair strengths between local
//! exemplars, and pruning of a weak bridge.
//!
//! Two 4x4 grids joined by a single point midway between them.
//!
//! ```text
//! cargo run --example local_view
//! ```

use eapcluster::localview::{classify_new_point, exemplar_count_histogram, pair_strengths, prune};
use eapcluster::{
    build_neighborhoods, decide, eap_run, similarity_from_points, EngineParams, PointSet, Result,
};

pub struct Summary {
    pub clusters_before: usize,
    pub clusters_after: usize,
    pub weakest_pair: Option<((usize, usize), usize)>,
}

fn dumbbell() -> Result<PointSet> {
    let mut pts = Vec::new();
    for offset in [0.0, 4.0] {
        for i in 0..8 {
            pts.push(vec![offset + 0.1 * (i % 4) as f64, 0.1 * (i / 4) as f64]);
        }
    }
    pts.push(vec![2.15, 0.05]);
    PointSet::new(pts, None)
}

pub fn run_example() -> Result<Summary> {
    let points = dumbbell()?;
    let s = similarity_from_points(&points, -10.0);
    let nbr = build_neighborhoods(&s, -1.0);
    let params = EngineParams {
        preference: -10.0,
        q: 2.0,
        epsilon: -1.0,
        ..Default::default()
    };
    let (b, _) = eap_run(&s, &nbr, &params)?;
    let res = decide(&s, &b);
    println!(
        "local exemplars {:?}, {} cluster(s)",
        res.exemplars,
        res.n_clusters()
    );

    for ((cluster, count), points) in exemplar_count_histogram(&res) {
        println!("  cluster {cluster}: {points} points linked to {count} exemplar(s)");
    }
    let report = pair_strengths(&res, &s, 3);
    for (&(a, b), &shared) in &report.pair_strength {
        println!("  exemplars {a} and {b} share {shared} point(s)");
    }
    let weakest = report
        .pair_strength
        .iter()
        .min_by_key(|(_, &n)| n)
        .map(|(&k, &n)| (k, n));

    let pruned = prune(&res, &s, 2)?;
    println!(
        "after pruning pairs sharing < 2 points: {} clusters",
        pruned.n_clusters()
    );

    // a new point near the right-hand grid
    let new = [4.2, 0.1];
    let s_new: Vec<f64> = pruned
        .exemplars
        .iter()
        .map(|&e| {
            let p = &points.points()[e];
            -((p[0] - new[0]).powi(2) + (p[1] - new[1]).powi(2)).sqrt()
        })
        .collect();
    println!(
        "new point {new:?} joins cluster {}",
        classify_new_point(&pruned, &s_new)?
    );

    Ok(Summary {
        clusters_before: res.n_clusters(),
        clusters_after: pruned.n_clusters(),
        weakest_pair: weakest,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
