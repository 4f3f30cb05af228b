//! Standard Affinity Propagation on the binary factor graph.
//!
//! Per sweep, with `β_ij = s_ij + α_ij` and `ρ_ij = s_ij + η_ij`:
//!
//! ```text
//! η_ij = −max_{k≠j} β_ik
//! α_jj = Σ_{k≠j} max(0, ρ_kj)
//! α_ij = min(0, ρ_jj + Σ_{k∉{i,j}} max(0, ρ_kj))      (i ≠ j)
//! ```
//!
//! `η` is damped first and `ρ` is built from the damped `η`; `α` is then
//! computed from that `ρ` and damped in turn.

use crate::decision::{
    finalize, most_similar, promoted_exemplar, AssignmentMatrix, ClusteringResult,
};
use crate::error::{Error, Result};
use crate::ingest::{EngineParams, SimilarityMatrix};
use crate::msg::{damp, top_two, BeliefMatrix, ConvergenceStatus, ConvergenceTracker};

#[derive(Debug, Clone, PartialEq)]
pub struct ApMessages {
    n: usize,
    alpha: Vec<f64>,
    eta: Vec<f64>,
    iteration: usize,
    rho: Vec<f64>,
    col_pos: Vec<f64>,
}

impl ApMessages {
    /// All-zero messages.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            alpha: vec![0.0; n * n],
            eta: vec![0.0; n * n],
            iteration: 0,
            rho: vec![0.0; n * n],
            col_pos: vec![0.0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn alpha_mut(&mut self) -> &mut [f64] {
        &mut self.alpha
    }

    pub fn eta_mut(&mut self) -> &mut [f64] {
        &mut self.eta
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// `b_ij = s_ij + η_ij + α_ij`.
    pub fn beliefs(&self, s: &SimilarityMatrix) -> BeliefMatrix {
        let values = s
            .values()
            .iter()
            .zip(&self.eta)
            .zip(&self.alpha)
            .map(|((s, e), a)| s + e + a)
            .collect();
        BeliefMatrix::new(self.n, values)
    }

    /// `α_jj ≥ 0`, `α_ij ≤ 0` off the diagonal, and no NaN anywhere.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let a = self.alpha[i * n + j];
                let e = self.eta[i * n + j];
                if a.is_nan() || e.is_nan() {
                    return Err(format!("NaN message at ({i}, {j})"));
                }
                if i == j && a < 0.0 {
                    return Err(format!("alpha[{i},{i}] = {a} < 0"));
                }
                if i != j && a > 0.0 {
                    return Err(format!("alpha[{i},{j}] = {a} > 0"));
                }
            }
        }
        Ok(())
    }
}

/// One synchronous sweep.
pub fn ap_iterate(s: &SimilarityMatrix, state: &mut ApMessages, damping: f64) -> Result<()> {
    let n = s.n();
    if state.n != n {
        return Err(Error::Dimension(format!(
            "messages are {0}x{0}, similarity is {1}x{1}",
            state.n, n
        )));
    }
    if !(0.0..=1.0).contains(&damping) {
        return Err(Error::InvalidParam(format!("damping {damping}")));
    }

    // η from the current α
    for i in 0..n {
        let row = i * n;
        if n == 1 {
            // a single-entry row has no competitor; no message
            state.eta[row] = damp(state.eta[row], 0.0, damping);
            continue;
        }
        let (first, arg, second) = top_two((0..n).map(|k| s.get(i, k) + state.alpha[row + k]));
        for j in 0..n {
            let competitor = if j == arg { second } else { first };
            state.eta[row + j] = damp(state.eta[row + j], -competitor, damping);
        }
    }

    // ρ and the positive column sums Σ_{k≠j} max(0, ρ_kj), accumulated in row order
    state.col_pos.iter_mut().for_each(|c| *c = 0.0);
    for i in 0..n {
        for j in 0..n {
            let r = s.get(i, j) + state.eta[i * n + j];
            state.rho[i * n + j] = r;
            if i != j {
                state.col_pos[j] += r.max(0.0);
            }
        }
    }

    for i in 0..n {
        for j in 0..n {
            let idx = i * n + j;
            let fresh = if i == j {
                state.col_pos[j]
            } else {
                let rest = state.col_pos[j] - state.rho[idx].max(0.0);
                (state.rho[j * n + j] + rest).min(0.0)
            };
            state.alpha[idx] = damp(state.alpha[idx], fresh, damping);
        }
    }

    state.iteration += 1;
    debug_assert!(
        state.check_invariants().is_ok(),
        "{:?}",
        state.check_invariants()
    );
    Ok(())
}

/// Iterates from zero messages until the exemplar pattern `[b_kk > 0]` is
/// unchanged for `convergence_window` sweeps, or `max_iters` is reached.
pub fn ap_run(
    s: &SimilarityMatrix,
    params: &EngineParams,
) -> Result<(BeliefMatrix, ConvergenceStatus)> {
    ap_run_observed(s, params, |_| {})
}

/// [`ap_run`], calling `observe` with the message state after every sweep.
pub fn ap_run_observed(
    s: &SimilarityMatrix,
    params: &EngineParams,
    mut observe: impl FnMut(&ApMessages),
) -> Result<(BeliefMatrix, ConvergenceStatus)> {
    params.validate()?;
    let mut state = ApMessages::new(s.n());
    let mut tracker = ConvergenceTracker::new(params.convergence_window);
    for _ in 0..params.max_iters {
        ap_iterate(s, &mut state, params.damping)?;
        observe(&state);
        let n = s.n();
        let diag = (0..n).map(|k| s.get(k, k) + state.eta[k * n + k] + state.alpha[k * n + k]);
        if tracker.observe(diag) {
            break;
        }
    }
    Ok((state.beliefs(s), tracker.status()))
}

/// Exemplars are `{k | b_kk > 0}` (or the single best `b_kk` if none is
/// positive); every other point joins its most similar exemplar, lowest
/// index on ties.
pub fn ap_decide(s: &SimilarityMatrix, b: &BeliefMatrix) -> ClusteringResult {
    let n = b.n();
    assert_eq!(s.n(), n, "similarity and belief sizes differ");
    let mut exemplars: Vec<usize> = (0..n).filter(|&k| b.get(k, k) > 0.0).collect();
    if exemplars.is_empty() && n > 0 {
        exemplars.push(promoted_exemplar(b));
    }
    let mut h = AssignmentMatrix::new(n);
    for &k in &exemplars {
        h.set(k, k, true);
    }
    for i in 0..n {
        if !h.get(i, i) {
            h.set(i, most_similar(s, i, &exemplars), true);
        }
    }
    finalize(s, h)
}
