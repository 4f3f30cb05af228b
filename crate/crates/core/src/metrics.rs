//! Sensitivity, positive predictive value and accuracy from a contingency
//! table between ground-truth and estimated clusters.
//!
//! With `T_ij` the overlap of truth cluster `i` and estimated cluster `j`,
//! `N_i` the truth sizes and `M_j` the estimated sizes:
//!
//! ```text
//! Sn  = Σ_i max_j T_ij / Σ_i N_i
//! PPV = Σ_j max_i T_ij / Σ_j M_j
//! Acc = sqrt(Sn · PPV)
//! ```
//!
//! Memberships are sets, so a point may belong to several truth clusters.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    /// Truth cluster id of each row.
    pub truth_ids: Vec<i64>,
    /// Estimated cluster id of each column.
    pub est_ids: Vec<i64>,
    /// Row-major `|truth| × |est|` overlaps.
    pub counts: Vec<Vec<usize>>,
    pub truth_sizes: Vec<usize>,
    pub est_sizes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreTriple {
    pub sn: f64,
    pub ppv: f64,
    pub accuracy: f64,
}

/// Builds `T` from per-point membership sets.
pub fn contingency(truth: &[BTreeSet<i64>], est: &[BTreeSet<i64>]) -> Result<ContingencyTable> {
    if truth.len() != est.len() {
        return Err(Error::PointCountMismatch(truth.len(), est.len()));
    }
    if let Some(p) = truth
        .iter()
        .zip(est)
        .position(|(t, e)| t.is_empty() || e.is_empty())
    {
        return Err(Error::EmptyMembership(p));
    }
    let index = |sets: &[BTreeSet<i64>]| -> BTreeMap<i64, usize> {
        let ids: BTreeSet<i64> = sets.iter().flatten().copied().collect();
        ids.into_iter().enumerate().map(|(k, id)| (id, k)).collect()
    };
    let t_index = index(truth);
    let e_index = index(est);

    let mut counts = vec![vec![0usize; e_index.len()]; t_index.len()];
    let mut truth_sizes = vec![0usize; t_index.len()];
    let mut est_sizes = vec![0usize; e_index.len()];
    for (t, e) in truth.iter().zip(est) {
        for id in t {
            truth_sizes[t_index[id]] += 1;
        }
        for id in e {
            est_sizes[e_index[id]] += 1;
        }
        for ti in t {
            for ei in e {
                counts[t_index[ti]][e_index[ei]] += 1;
            }
        }
    }
    Ok(ContingencyTable {
        truth_ids: t_index.into_keys().collect(),
        est_ids: e_index.into_keys().collect(),
        counts,
        truth_sizes,
        est_sizes,
    })
}

pub fn score(t: &ContingencyTable) -> Result<ScoreTriple> {
    if t.truth_sizes.is_empty() || t.est_sizes.is_empty() {
        return Err(Error::InvalidParam("empty contingency table".into()));
    }
    if let Some(z) = t.truth_sizes.iter().position(|&s| s == 0) {
        return Err(Error::ZeroSizeCluster(z));
    }
    if let Some(z) = t.est_sizes.iter().position(|&s| s == 0) {
        return Err(Error::ZeroSizeCluster(z));
    }
    let rows = t.counts.len();
    let cols = t.est_sizes.len();

    // N_i · max_j(T_ij / N_i) = max_j T_ij
    let sn_num: usize = t
        .counts
        .iter()
        .map(|r| r.iter().copied().max().unwrap_or(0))
        .sum();
    let ppv_num: usize = (0..cols)
        .map(|j| (0..rows).map(|i| t.counts[i][j]).max().unwrap_or(0))
        .sum();
    let sn = sn_num as f64 / t.truth_sizes.iter().sum::<usize>() as f64;
    let ppv = ppv_num as f64 / t.est_sizes.iter().sum::<usize>() as f64;
    Ok(ScoreTriple {
        sn,
        ppv,
        accuracy: (sn * ppv).sqrt(),
    })
}

/// Single-membership convenience: ground-truth labels against cluster ids.
pub fn score_labels(truth: &[i64], clusters: &[usize]) -> Result<ScoreTriple> {
    let t: Vec<BTreeSet<i64>> = truth.iter().map(|&l| BTreeSet::from([l])).collect();
    let e: Vec<BTreeSet<i64>> = clusters
        .iter()
        .map(|&c| BTreeSet::from([c as i64]))
        .collect();
    score(&contingency(&t, &e)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(v: &[i64]) -> Vec<BTreeSet<i64>> {
        v.iter().map(|&x| BTreeSet::from([x])).collect()
    }

    #[test]
    fn identical_partitions() {
        let t = contingency(&single(&[0, 0, 1, 1]), &single(&[0, 0, 1, 1])).unwrap();
        assert_eq!(t.counts, vec![vec![2, 0], vec![0, 2]]);
        let sc = score(&t).unwrap();
        assert_eq!((sc.sn, sc.ppv, sc.accuracy), (1.0, 1.0, 1.0));
    }

    #[test]
    fn split_estimate() {
        let t = contingency(&single(&[0, 0, 0, 0]), &single(&[0, 0, 1, 1])).unwrap();
        assert_eq!(t.counts, vec![vec![2, 2]]);
        let sc = score(&t).unwrap();
        assert_eq!(sc.sn, 0.5);
        assert_eq!(sc.ppv, 1.0);
        assert!((sc.accuracy - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn multi_membership_counts_in_both_rows() {
        let mut truth = single(&[0, 0, 1]);
        truth[1].insert(1);
        let t = contingency(&truth, &single(&[5, 5, 5])).unwrap();
        assert_eq!(t.counts, vec![vec![2], vec![2]]);
        assert_eq!(t.truth_sizes, vec![2, 2]);
        assert_eq!(t.est_sizes, vec![3]);
    }

    #[test]
    fn empty_membership_names_point() {
        let mut truth = single(&[0, 1]);
        truth[1].clear();
        assert!(matches!(
            contingency(&truth, &single(&[0, 0])),
            Err(Error::EmptyMembership(1))
        ));
    }

    #[test]
    fn zero_size_cluster_rejected() {
        let t = ContingencyTable {
            truth_ids: vec![0],
            est_ids: vec![0, 1],
            counts: vec![vec![1, 0]],
            truth_sizes: vec![1],
            est_sizes: vec![1, 0],
        };
        assert!(matches!(score(&t), Err(Error::ZeroSizeCluster(1))));
    }
}
