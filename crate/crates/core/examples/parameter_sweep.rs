//! A grid over q and epsilon on two blobs, written out as a result document.
//!
//! Very small epsilon makes neighborhoods overlap so much that the messages
//! overflow; those grid points are reported and skipped.
//!
//! ```text
//! cargo run --release --example parameter_sweep
//! ```

use std::error::Error;

use clap::Parser;
use eapcluster::cli::{cmd_cluster, Cli, Command};

pub struct Summary {
    pub rows: usize,
    pub overflowed: usize,
    pub best_accuracy: f64,
    pub n_clusters: usize,
}

pub fn run_example() -> Result<Summary, Box<dyn Error>> {
    let cli = Cli::try_parse_from([
        "eapcluster",
        "cluster",
        "--mode",
        "eap",
        "--generate",
        "blobs:n=60;centers=0,0|10,0;stddevs=0.5|1",
        "--preference=-30",
        "--sweep-q=-3:0:3",
        "--sweep-epsilon=-3:-0.5:3",
    ])?;
    let Command::Cluster(args) = cli.command else {
        unreachable!()
    };
    let doc = cmd_cluster(&args)?;

    let rows = doc.sweep.as_deref().unwrap_or_default();
    println!(
        "{:>8} {:>8} {:>9} {:>9}",
        "q", "epsilon", "clusters", "accuracy"
    );
    for r in rows {
        match &r.error {
            Some(e) => println!("{:>8.2} {:>8.2}   {e}", r.q.0, r.epsilon.unwrap().0),
            None => println!(
                "{:>8.2} {:>8.2} {:>9} {:>9.3}",
                r.q.0,
                r.epsilon.unwrap().0,
                r.n_clusters,
                r.accuracy.unwrap()
            ),
        }
    }
    let best = doc.scores.unwrap().accuracy;
    println!(
        "best: q {:.2}, epsilon {:.2}, accuracy {best:.3}",
        doc.config.q.0,
        doc.config.epsilon.unwrap().0
    );

    let path = std::env::temp_dir().join("eapcluster_sweep.json");
    std::fs::write(&path, doc.to_json()?)?;
    println!("document written to {}", path.display());
    Ok(Summary {
        rows: rows.len(),
        overflowed: rows.iter().filter(|r| r.error.is_some()).count(),
        best_accuracy: best,
        n_clusters: doc.n_clusters,
    })
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
