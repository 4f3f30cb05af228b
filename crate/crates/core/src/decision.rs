//! Turning beliefs into clusters.
//!
//! Beliefs are thresholded at zero, non-exemplar columns are cleared, points
//! left without an exemplar are attached to their most similar one, and the
//! clusters are the connected components of the symmetrized assignment
//! graph. A point linked to several local exemplars bridges their
//! sub-clusters into one component.

use crate::error::{Error, Result};
use crate::ingest::SimilarityMatrix;
use crate::msg::BeliefMatrix;

/// Dense binary n×n matrix `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl AssignmentMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            bits: vec![false; n * n],
        }
    }

    /// Builds `H` from per-row lists of set columns.
    pub fn from_row_lists(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        let mut h = Self::new(n);
        for (i, row) in rows.iter().enumerate() {
            for &j in row {
                if j >= n {
                    return Err(Error::Dimension(format!(
                        "column {j} out of range in row {i} of a {n}x{n} matrix"
                    )));
                }
                h.set(i, j, true);
            }
        }
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[i * self.n + j] = v;
    }

    /// Columns set in row `i`, ascending.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.bits[i * self.n..(i + 1) * self.n]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| j)
    }

    pub fn row_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|i| self.row_ones(i).collect()).collect()
    }

    /// `Ĥ > 0` of `Ĥ = (H + Hᵀ)/2`, i.e. the union of `H` and its transpose.
    pub fn symmetrized(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) {
                    out.set(j, i, true);
                }
            }
        }
        out
    }
}

/// Outcome of a decision step over `n` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusteringResult {
    assignment: AssignmentMatrix,
    pub exemplars: Vec<usize>,
    /// `L[i]`: the exemplars point `i` is attached to, ascending.
    pub exemplar_lists: Vec<Vec<usize>>,
    /// Contiguous from 0, numbered in order of each cluster's lowest point.
    pub cluster_ids: Vec<usize>,
}

impl ClusteringResult {
    pub fn assignment(&self) -> &AssignmentMatrix {
        &self.assignment
    }

    pub fn n(&self) -> usize {
        self.cluster_ids.len()
    }

    pub fn n_clusters(&self) -> usize {
        self.cluster_ids.iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_exemplar(&self, k: usize) -> bool {
        self.exemplars.binary_search(&k).is_ok()
    }

    /// Members of every cluster, each ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_clusters()];
        for (i, &c) in self.cluster_ids.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    /// Rebuilds a result from a serialized assignment (rows of `H`).
    pub fn from_assignment(s: &SimilarityMatrix, h: AssignmentMatrix) -> Result<Self> {
        extract_clusters(s, h)
    }
}

/// The full decision: threshold, exemplars, consistency, left-out points,
/// components.
pub fn decide(s: &SimilarityMatrix, b: &BeliefMatrix) -> ClusteringResult {
    let n = b.n();
    assert_eq!(s.n(), n, "similarity and belief sizes differ");
    let mut h = AssignmentMatrix::new(n);
    for (idx, &v) in b.values().iter().enumerate() {
        debug_assert!(!v.is_nan(), "NaN belief");
        h.bits[idx] = v > 0.0;
    }
    if n > 0 && !(0..n).any(|k| h.get(k, k)) {
        let k = promoted_exemplar(b);
        h.set(k, k, true);
    }
    finalize(s, h)
}

/// Index with the largest diagonal belief, lowest index on ties.
pub(crate) fn promoted_exemplar(b: &BeliefMatrix) -> usize {
    let mut best = 0;
    for k in 1..b.n() {
        if b.get(k, k) > b.get(best, best) {
            best = k;
        }
    }
    best
}

/// Consistency-and-components stage on an existing `H`. Exemplars are the
/// set diagonal entries; there must be at least one.
pub fn extract_clusters(s: &SimilarityMatrix, h: AssignmentMatrix) -> Result<ClusteringResult> {
    if s.n() != h.n() {
        return Err(Error::Dimension(format!(
            "similarity is {0}x{0}, assignment is {1}x{1}",
            s.n(),
            h.n()
        )));
    }
    if h.n() > 0 && !(0..h.n()).any(|k| h.get(k, k)) {
        return Err(Error::InvalidParam("assignment has no exemplar".into()));
    }
    Ok(finalize(s, h))
}

pub(crate) fn finalize(s: &SimilarityMatrix, mut h: AssignmentMatrix) -> ClusteringResult {
    let n = h.n();
    let is_exemplar: Vec<bool> = (0..n).map(|k| h.get(k, k)).collect();
    let exemplars: Vec<usize> = (0..n).filter(|&k| is_exemplar[k]).collect();

    for i in 0..n {
        for j in 0..n {
            if !is_exemplar[j] {
                h.set(i, j, false);
            }
        }
    }

    let mut lists = Vec::with_capacity(n);
    for i in 0..n {
        let mut l: Vec<usize> = h.row_ones(i).collect();
        if l.is_empty() {
            let j = most_similar(s, i, &exemplars);
            h.set(i, j, true);
            l.push(j);
        }
        lists.push(l);
    }

    let mut dsu = DisjointSet::new(n);
    for (i, l) in lists.iter().enumerate() {
        for &j in l {
            dsu.union(i, j);
        }
    }
    let cluster_ids = dsu.labels();

    ClusteringResult {
        assignment: h,
        exemplars,
        exemplar_lists: lists,
        cluster_ids,
    }
}

/// `argmax_{k ∈ candidates} s(i,k)`, lowest index on ties.
pub(crate) fn most_similar(s: &SimilarityMatrix, i: usize, candidates: &[usize]) -> usize {
    let mut best = candidates[0];
    for &k in &candidates[1..] {
        if s.get(i, k) > s.get(i, best) {
            best = k;
        }
    }
    best
}

/// Components of a symmetric adjacency matrix, labelled contiguously in
/// order of each component's lowest index.
pub fn connected_components(adj: &AssignmentMatrix) -> Result<Vec<usize>> {
    let n = adj.n();
    let mut dsu = DisjointSet::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (adj.get(i, j), adj.get(j, i));
            if a != b {
                return Err(Error::Asymmetric(i, j));
            }
            if a {
                dsu.union(i, j);
            }
        }
    }
    Ok(dsu.labels())
}

/// Union-find with path compression and union by rank.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }

    pub(crate) fn labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut label_of_root = vec![usize::MAX; n];
        let mut next = 0;
        (0..n)
            .map(|i| {
                let r = self.find(i);
                if label_of_root[r] == usize::MAX {
                    label_of_root[r] = next;
                    next += 1;
                }
                label_of_root[r]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sim(n: usize) -> SimilarityMatrix {
        SimilarityMatrix::from_fn(n, |i, j| -((i as f64) - (j as f64)).abs())
    }

    #[test]
    fn two_by_two_trace() {
        let b = BeliefMatrix::from_rows(&[vec![1.0, 0.5], vec![-1.0, 2.0]]);
        let r = decide(&sim(2), &b);
        assert_eq!(r.assignment().row_lists(), vec![vec![0, 1], vec![1]]);
        assert_eq!(r.exemplars, vec![0, 1]);
        assert_eq!(r.cluster_ids, vec![0, 0]);
        assert_eq!(r.exemplar_lists, vec![vec![0, 1], vec![1]]);
    }

    #[test]
    fn all_singletons() {
        let b = BeliefMatrix::from_rows(&[
            vec![1.0, -1.0, 0.0],
            vec![-2.0, 1.0, -0.5],
            vec![0.0, -3.0, 4.0],
        ]);
        let r = decide(&sim(3), &b);
        assert_eq!(r.cluster_ids, vec![0, 1, 2]);
        assert_eq!(r.n_clusters(), 3);
    }

    #[test]
    fn empty_exemplar_set_promotes_lowest_index() {
        let b = BeliefMatrix::from_rows(&[vec![-1.0, 3.0], vec![-2.0, -1.0]]);
        let r = decide(&sim(2), &b);
        assert_eq!(r.exemplars, vec![0]);
        // column 1 is cleared, so point 1 is left out and joins exemplar 0
        assert_eq!(r.exemplar_lists, vec![vec![0], vec![0]]);
        assert_eq!(r.cluster_ids, vec![0, 0]);
        assert!(r.assignment().get(1, 0));
        assert!(!r.assignment().get(0, 1));
    }

    #[test]
    fn components_examples() {
        let mut chain = AssignmentMatrix::new(4);
        for (a, b) in [(0, 1), (1, 2)] {
            chain.set(a, b, true);
            chain.set(b, a, true);
        }
        assert_eq!(connected_components(&chain).unwrap(), vec![0, 0, 0, 1]);
        assert_eq!(
            connected_components(&AssignmentMatrix::new(4)).unwrap(),
            vec![0, 1, 2, 3]
        );
        let mut full = AssignmentMatrix::new(3);
        for i in 0..3 {
            for j in 0..3 {
                full.set(i, j, true);
            }
        }
        assert_eq!(connected_components(&full).unwrap(), vec![0, 0, 0]);

        let mut asym = AssignmentMatrix::new(3);
        asym.set(0, 2, true);
        assert!(matches!(
            connected_components(&asym),
            Err(Error::Asymmetric(0, 2))
        ));
    }

    #[test]
    fn labels_follow_lowest_member() {
        let mut adj = AssignmentMatrix::new(4);
        adj.set(1, 3, true);
        adj.set(3, 1, true);
        assert_eq!(connected_components(&adj).unwrap(), vec![0, 1, 2, 1]);
    }

    #[test]
    fn extract_is_idempotent() {
        let b = BeliefMatrix::from_rows(&[
            vec![1.0, 0.2, -1.0, 0.3],
            vec![0.4, -1.0, -1.0, 0.1],
            vec![-1.0, -1.0, 2.0, -1.0],
            vec![-1.0, -1.0, -1.0, -0.5],
        ]);
        let s = sim(4);
        let r = decide(&s, &b);
        let again = extract_clusters(&s, r.assignment().clone()).unwrap();
        assert_eq!(r, again);
    }
}
