//! Structure inside clusters: how many local exemplars each point is linked
//! to, how many points two local exemplars share, and pruning of weak
//! exemplar-to-exemplar bridges.

use std::collections::{BTreeMap, BTreeSet};

use crate::decision::{finalize, most_similar, AssignmentMatrix, ClusteringResult};
use crate::error::{Error, Result};
use crate::ingest::SimilarityMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalViewReport {
    /// `|L[i]|` for every point.
    pub per_point_exemplar_count: Vec<usize>,
    /// Shared-point counts for same-cluster exemplar pairs `(j, k)`, `j < k`;
    /// pairs sharing no point are absent.
    pub pair_strength: BTreeMap<(usize, usize), usize>,
    pub cluster_of_exemplar: BTreeMap<usize, usize>,
}

/// `(cluster, c) → number of points in that cluster with |L[i]| = c`.
pub fn exemplar_count_histogram(res: &ClusteringResult) -> BTreeMap<(usize, usize), usize> {
    let mut hist = BTreeMap::new();
    for (l, &c) in res.exemplar_lists.iter().zip(&res.cluster_ids) {
        *hist.entry((c, l.len())).or_insert(0) += 1;
    }
    hist
}

/// Mean `|L[i]|` over the points of each cluster.
pub fn mean_exemplar_count(res: &ClusteringResult) -> Vec<f64> {
    let k = res.n_clusters();
    let mut sum = vec![0usize; k];
    let mut cnt = vec![0usize; k];
    for (l, &c) in res.exemplar_lists.iter().zip(&res.cluster_ids) {
        sum[c] += l.len();
        cnt[c] += 1;
    }
    sum.iter()
        .zip(&cnt)
        .map(|(&s, &c)| s as f64 / c as f64)
        .collect()
}

/// For every exemplar `j`, the points attached to it, ascending.
fn members_by_exemplar(res: &ClusteringResult) -> BTreeMap<usize, Vec<usize>> {
    let mut members: BTreeMap<usize, Vec<usize>> =
        res.exemplars.iter().map(|&k| (k, Vec::new())).collect();
    for (i, l) in res.exemplar_lists.iter().enumerate() {
        for k in l {
            members.entry(*k).or_default().push(i);
        }
    }
    members
}

fn common(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut x, mut y) = (0, 0);
    let mut out = Vec::new();
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[x]);
                x += 1;
                y += 1;
            }
        }
    }
    out
}

/// Pair strengths between each exemplar and its `fanout` most similar
/// exemplars of the same cluster.
pub fn pair_strengths(
    res: &ClusteringResult,
    s: &SimilarityMatrix,
    fanout: usize,
) -> LocalViewReport {
    let members = members_by_exemplar(res);
    let cluster_of_exemplar: BTreeMap<usize, usize> = res
        .exemplars
        .iter()
        .map(|&k| (k, res.cluster_ids[k]))
        .collect();

    let mut by_cluster: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&k, &c) in &cluster_of_exemplar {
        by_cluster.entry(c).or_default().push(k);
    }

    let mut pair_strength = BTreeMap::new();
    let mut visited = BTreeSet::new();
    for &j in &res.exemplars {
        let mut peers: Vec<usize> = by_cluster[&cluster_of_exemplar[&j]]
            .iter()
            .copied()
            .filter(|&k| k != j)
            .collect();
        // most similar first; stable sort keeps lower indices first on ties
        peers.sort_by(|&a, &b| s.get(j, b).total_cmp(&s.get(j, a)));
        for &k in peers.iter().take(fanout) {
            let key = (j.min(k), j.max(k));
            if !visited.insert(key) {
                continue;
            }
            let strength = common(&members[&key.0], &members[&key.1]).len();
            if strength > 0 {
                pair_strength.insert(key, strength);
            }
        }
    }

    LocalViewReport {
        per_point_exemplar_count: res.exemplar_lists.iter().map(Vec::len).collect(),
        pair_strength,
        cluster_of_exemplar,
    }
}

/// Cuts every same-cluster exemplar bridge with fewer than `threshold`
/// shared points: each shared point drops its link to the less similar of
/// the two exemplars. Components are recomputed afterwards, so clusters can
/// split.
pub fn prune(
    res: &ClusteringResult,
    s: &SimilarityMatrix,
    threshold: usize,
) -> Result<ClusteringResult> {
    if threshold < 2 {
        return Err(Error::InvalidParam(format!(
            "pruning threshold {threshold} must be at least 2"
        )));
    }
    let n = res.n();
    let members = members_by_exemplar(res);
    let mut drop: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (a, &j) in res.exemplars.iter().enumerate() {
        for &k in &res.exemplars[a + 1..] {
            if res.cluster_ids[j] != res.cluster_ids[k] {
                continue;
            }
            let shared = common(&members[&j], &members[&k]);
            if shared.is_empty() || shared.len() >= threshold {
                continue;
            }
            for i in shared {
                let loser = if i == j {
                    k
                } else if i == k || s.get(i, j) < s.get(i, k) {
                    j
                } else if s.get(i, k) < s.get(i, j) {
                    k
                } else {
                    j.max(k)
                };
                drop[i].insert(loser);
            }
        }
    }

    let rows: Vec<Vec<usize>> = res
        .exemplar_lists
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let kept: Vec<usize> = l.iter().copied().filter(|k| !drop[i].contains(k)).collect();
            if kept.is_empty() {
                vec![most_similar(s, i, l)]
            } else {
                kept
            }
        })
        .collect();
    let h = AssignmentMatrix::from_row_lists(&rows)?;
    Ok(finalize(s, h))
}

/// Cluster of the most similar exemplar; `s_new[a]` is the similarity of the
/// new point to `res.exemplars[a]`. Lowest exemplar index wins ties.
pub fn classify_new_point(res: &ClusteringResult, s_new: &[f64]) -> Result<usize> {
    if s_new.len() != res.exemplars.len() || s_new.is_empty() {
        return Err(Error::Dimension(format!(
            "{} similarities for {} exemplars",
            s_new.len(),
            res.exemplars.len()
        )));
    }
    let mut best = 0;
    for a in 1..s_new.len() {
        if s_new[a] > s_new[best] {
            best = a;
        }
    }
    Ok(res.cluster_ids[res.exemplars[best]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::extract_clusters;

    fn line(n: usize) -> SimilarityMatrix {
        SimilarityMatrix::from_fn(n, |i, j| -((i as f64) - (j as f64)).abs())
    }

    fn result(rows: &[Vec<usize>], s: &SimilarityMatrix) -> ClusteringResult {
        extract_clusters(s, AssignmentMatrix::from_row_lists(rows).unwrap()).unwrap()
    }

    #[test]
    fn single_exemplar_histogram() {
        let s = line(3);
        let r = result(&[vec![0], vec![0], vec![0]], &s);
        let h = exemplar_count_histogram(&r);
        assert_eq!(h, BTreeMap::from([((0, 1), 3)]));
    }

    #[test]
    fn mixed_histogram() {
        // exemplars 0 and 2; point 1 links both, point 2 links itself and 0
        let s = line(3);
        let r = result(&[vec![0], vec![0, 2], vec![0, 2]], &s);
        assert_eq!(
            r.exemplar_lists.iter().map(Vec::len).collect::<Vec<_>>(),
            vec![1, 2, 2]
        );
        let h = exemplar_count_histogram(&r);
        assert_eq!(h, BTreeMap::from([((0, 1), 1), ((0, 2), 2)]));
    }

    #[test]
    fn strength_counts_shared_points() {
        let s = line(10);
        let mut rows: Vec<Vec<usize>> = (0..10).map(|_| vec![0]).collect();
        rows[5] = vec![5];
        for i in [4, 7, 9] {
            rows[i] = vec![0, 5];
        }
        let r = result(&rows, &s);
        let rep = pair_strengths(&r, &s, 3);
        assert_eq!(rep.pair_strength, BTreeMap::from([((0, 5), 3)]));
    }

    #[test]
    fn different_clusters_have_no_pair() {
        let s = line(4);
        let r = result(&[vec![0], vec![0], vec![3], vec![3]], &s);
        assert_eq!(r.n_clusters(), 2);
        assert!(pair_strengths(&r, &s, 5).pair_strength.is_empty());
    }

    #[test]
    fn chain_has_two_pairs() {
        // exemplars 0, 3, 6; points 1-2 bridge 0–3, points 4-5 bridge 3–6
        let s = line(7);
        let r = result(
            &[
                vec![0],
                vec![0, 3],
                vec![0, 3],
                vec![3],
                vec![3, 6],
                vec![3, 6],
                vec![6],
            ],
            &s,
        );
        let rep = pair_strengths(&r, &s, usize::MAX);
        assert_eq!(
            rep.pair_strength,
            BTreeMap::from([((0, 3), 2), ((3, 6), 2)])
        );
    }

    #[test]
    fn prune_splits_single_bridge() {
        // point 2 is the only link between exemplars 0 and 4 and is closer to 0
        let s = SimilarityMatrix::from_fn(5, |i, j| {
            let x: [f64; 5] = [0.0, 1.0, 1.9, 3.0, 4.0];
            -(x[i] - x[j]).abs()
        });
        let r = result(&[vec![0], vec![0], vec![0, 4], vec![4], vec![4]], &s);
        assert_eq!(r.n_clusters(), 1);
        let p = prune(&r, &s, 2).unwrap();
        assert_eq!(p.n_clusters(), 2);
        assert_eq!(p.exemplar_lists[2], vec![0]);
        assert_eq!(p.cluster_ids, vec![0, 0, 0, 1, 1]);
    }

    #[test]
    fn prune_keeps_strong_links() {
        let s = line(7);
        let r = result(
            &[
                vec![0],
                vec![0, 3],
                vec![0, 3],
                vec![3],
                vec![3, 6],
                vec![3, 6],
                vec![6],
            ],
            &s,
        );
        assert_eq!(prune(&r, &s, 2).unwrap(), r);
        assert!(prune(&r, &s, 1).is_err());
        assert_eq!(prune(&r, &s, 3).unwrap().n_clusters(), 3);
    }

    #[test]
    fn classify() {
        let s = line(6);
        let r = result(&[vec![0], vec![0], vec![2], vec![2], vec![5], vec![5]], &s);
        assert_eq!(r.cluster_ids, vec![0, 0, 1, 1, 2, 2]);
        assert_eq!(classify_new_point(&r, &[-3.0, -2.0, -0.5]).unwrap(), 2);
        assert_eq!(classify_new_point(&r, &[-1.0, -1.0, -5.0]).unwrap(), 0);
        let single = result(&[vec![0], vec![0]], &line(2));
        assert_eq!(classify_new_point(&single, &[-100.0]).unwrap(), 0);
    }
}
