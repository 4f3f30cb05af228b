//! Scoring a clustering against ground truth, including points that belong
//! to more than one cluster.
//!
//! ```text
//! cargo run --example evaluate
//! ```

use std::collections::BTreeSet;

use eapcluster::metrics::score_labels;
use eapcluster::{contingency, score, Result, ScoreTriple};

pub fn run_example() -> Result<(ScoreTriple, ScoreTriple)> {
    // one true cluster split in two by the estimate
    let truth = [0, 0, 0, 0, 1, 1];
    let est = [0, 0, 1, 1, 2, 2];
    let split = score_labels(&truth, &est)?;
    println!(
        "split:   sn {:.3}  ppv {:.3}  accuracy {:.3}",
        split.sn, split.ppv, split.accuracy
    );

    // point 2 is a member of both true clusters
    let sets = |v: &[&[i64]]| -> Vec<BTreeSet<i64>> {
        v.iter().map(|m| m.iter().copied().collect()).collect()
    };
    let truth = sets(&[&[0], &[0], &[0, 1], &[1], &[1]]);
    let est = sets(&[&[0], &[0], &[0], &[1], &[1]]);
    let t = contingency(&truth, &est)?;
    println!(
        "contingency rows (truth) x columns (estimate): {:?}",
        t.counts
    );
    let overlap = score(&t)?;
    println!(
        "overlap: sn {:.3}  ppv {:.3}  accuracy {:.3}",
        overlap.sn, overlap.ppv, overlap.accuracy
    );
    Ok((split, overlap))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
