//! Pieces shared by the message-passing engines: beliefs, convergence
//! tracking and damping.

use serde::{Deserialize, Serialize};

/// Accumulated beliefs `b_ij`, the sum of all messages into `h_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefMatrix {
    n: usize,
    values: Vec<f64>,
}

impl BeliefMatrix {
    pub fn new(n: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), n * n, "belief matrix must be n x n");
        Self { n, values }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.get(k, k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceStatus {
    pub converged: bool,
    pub iterations_run: usize,
    /// Consecutive sweeps, ending at the last one, with an unchanged
    /// exemplar pattern.
    pub stable_window: usize,
}

/// Tracks the sign pattern `[b_kk > 0]` across sweeps.
#[derive(Debug)]
pub(crate) struct ConvergenceTracker {
    window: usize,
    last: Vec<bool>,
    stable: usize,
    iterations: usize,
}

impl ConvergenceTracker {
    pub(crate) fn new(window: usize) -> Self {
        Self {
            window,
            last: Vec::new(),
            stable: 0,
            iterations: 0,
        }
    }

    /// Records one sweep; returns true once the pattern has held for
    /// `window` consecutive sweeps.
    pub(crate) fn observe(&mut self, diagonal: impl Iterator<Item = f64>) -> bool {
        let pattern: Vec<bool> = diagonal.map(|b| b > 0.0).collect();
        self.iterations += 1;
        if self.iterations > 1 && pattern == self.last {
            self.stable += 1;
        } else {
            self.stable = 1;
            self.last = pattern;
        }
        self.stable >= self.window
    }

    pub(crate) fn status(&self) -> ConvergenceStatus {
        ConvergenceStatus {
            converged: self.stable >= self.window,
            iterations_run: self.iterations,
            stable_window: self.stable,
        }
    }
}

/// `λ·old + (1−λ)·new`; with λ = 0 the fresh value is taken verbatim.
#[inline]
pub(crate) fn damp(old: f64, new: f64, damping: f64) -> f64 {
    if damping == 0.0 {
        new
    } else {
        damping * old + (1.0 - damping) * new
    }
}

/// Largest and second-largest values with the (lowest) index of the largest.
/// Missing entries are `-inf`.
#[inline]
pub(crate) fn top_two(values: impl Iterator<Item = f64>) -> (f64, usize, f64) {
    let mut first = f64::NEG_INFINITY;
    let mut arg = usize::MAX;
    let mut second = f64::NEG_INFINITY;
    for (k, v) in values.enumerate() {
        if v > first || arg == usize::MAX {
            second = first;
            first = v;
            arg = k;
        } else if v > second {
            second = v;
        }
    }
    (first, arg, second)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_two_ties_keep_lowest_index() {
        let (a, k, b) = top_two([1.0, 3.0, 3.0, 2.0].into_iter());
        assert_eq!((a, k, b), (3.0, 1, 3.0));
        let (a, k, b) = top_two([5.0].into_iter());
        assert_eq!((a, k, b), (5.0, 0, f64::NEG_INFINITY));
        let (a, k, _) = top_two(std::iter::empty());
        assert_eq!((a, k), (f64::NEG_INFINITY, usize::MAX));
    }

    #[test]
    fn tracker_counts_stable_sweeps() {
        let mut t = ConvergenceTracker::new(3);
        assert!(!t.observe([1.0, -1.0].into_iter()));
        assert!(!t.observe([2.0, -3.0].into_iter()));
        assert!(!t.observe([-2.0, -3.0].into_iter()));
        assert!(!t.observe([-2.0, -3.0].into_iter()));
        assert!(t.observe([-1.0, -0.5].into_iter()));
        let st = t.status();
        assert!(st.converged);
        assert_eq!(st.iterations_run, 5);
        assert_eq!(st.stable_window, 3);
    }

    #[test]
    fn damping_extremes() {
        assert_eq!(damp(1.0, 5.0, 0.0), 5.0);
        assert_eq!(damp(1.0, 5.0, 0.5), 3.0);
    }
}
