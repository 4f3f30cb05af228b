//! Extended Affinity Propagation.
//!
//! Two changes to AP. The one-exemplar-per-point constraint is relaxed: every
//! extra exemplar a point selects costs `q_i`, which clips the row message at
//! `η_ij ≥ q_i`. And every ε-neighborhood `∂_j` may hold at most one
//! exemplar, enforced through the messages `ψ_ij` (for `i ∈ ∂_j`) that the
//! neighborhood constraint sends to the diagonal variable `h_ii`.
//!
//! A sweep, in order:
//!
//! ```text
//! β_ij = s_ij + α_ij + [i=j]·F_i
//! η_ij = max(−max_{k≠j} β_ik, q_i)                         (damped)
//! φ_ij = s_ii + α_ii + η_ii + F_i − ψ_ij                   (i ∈ ∂_j)
//! ψ_ij = −max(0, max_{l∈∂_j, l≠i} φ_lj)                    (damped)
//! F_i  = Σ_{j : i∈∂_j} ψ_ij
//! ρ_ij = s_ij + η_ij + [i=j]·F_i
//! α    as in AP, from ρ                                     (damped)
//! ```
//!
//! With `q = −∞` and singleton neighborhoods every ψ is zero and the sweep
//! is exactly an AP sweep.

use crate::error::{Error, Result};
use crate::ingest::{EngineParams, Neighborhoods, SimilarityMatrix};
use crate::msg::{damp, top_two, BeliefMatrix, ConvergenceStatus, ConvergenceTracker};

/// Per-point penalties `q_i`, each in `[−∞, +∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyVector(Vec<f64>);

impl PenaltyVector {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if let Some(bad) = q.iter().find(|v| v.is_nan() || **v == f64::INFINITY) {
            return Err(Error::InvalidParam(format!("penalty {bad}")));
        }
        Ok(Self(q))
    }

    /// The same `q` for every point.
    pub fn constant(n: usize, q: f64) -> Self {
        Self(vec![q; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Message state of one EAP run. `ψ` is stored in the flat layout of the
/// neighborhoods it was created for.
#[derive(Debug, Clone, PartialEq)]
pub struct EapMessages {
    n: usize,
    alpha: Vec<f64>,
    eta: Vec<f64>,
    psi: Vec<f64>,
    f: Vec<f64>,
    iteration: usize,
    rho: Vec<f64>,
    col_pos: Vec<f64>,
    phi: Vec<f64>,
}

impl EapMessages {
    pub fn new(nbr: &Neighborhoods) -> Self {
        let n = nbr.n();
        Self {
            n,
            alpha: vec![0.0; n * n],
            eta: vec![0.0; n * n],
            psi: vec![0.0; nbr.total_size()],
            f: vec![0.0; n],
            iteration: 0,
            rho: vec![0.0; n * n],
            col_pos: vec![0.0; n],
            phi: Vec::new(),
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

    /// `ψ` in neighborhood order: the entries for `∂_0`, then `∂_1`, ….
    pub fn psi_flat(&self) -> &[f64] {
        &self.psi
    }

    /// `F_i = Σ_{j : i∈∂_j} ψ_ij`.
    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// `ψ_ij`, the message from the constraint on `∂_j` to `h_ii`.
    pub fn psi(&self, nbr: &Neighborhoods, i: usize, j: usize) -> Result<f64> {
        nbr.position(j, i)
            .map(|p| self.psi[p])
            .ok_or(Error::OutsideNeighborhood {
                point: i,
                center: j,
            })
    }

    /// `b_ii = s_ii + η_ii + α_ii + F_i`; off the diagonal
    /// `b_ij = s_ij + η_ij + α_ij`.
    pub fn beliefs(&self, s: &SimilarityMatrix) -> BeliefMatrix {
        let n = self.n;
        let mut values: Vec<f64> = s
            .values()
            .iter()
            .zip(&self.eta)
            .zip(&self.alpha)
            .map(|((s, e), a)| s + e + a)
            .collect();
        for i in 0..n {
            values[i * n + i] += self.f[i];
        }
        BeliefMatrix::new(n, values)
    }

    /// Sign structure of the messages: `α_jj ≥ 0`, `α_ij ≤ 0` (i ≠ j),
    /// `η_ij ≥ q_i`, `ψ ≤ 0`, `F_i = Σ ψ_ij` exactly, no NaN.
    pub fn check_invariants(&self, nbr: &Neighborhoods, q: &PenaltyVector) -> Result<(), String> {
        let n = self.n;
        let q = q.as_slice();
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
                if e < q[i] {
                    return Err(format!("eta[{i},{j}] = {e} < q = {}", q[i]));
                }
            }
        }
        if let Some(p) = self.psi.iter().position(|v| v.is_nan() || *v > 0.0) {
            return Err(format!("psi entry {p} = {}", self.psi[p]));
        }
        let expected = sum_psi(nbr, &self.psi, n);
        for i in 0..n {
            if self.f[i].to_bits() != expected[i].to_bits() || self.f[i] > 0.0 {
                return Err(format!(
                    "F[{i}] = {} but sum of psi = {}",
                    self.f[i], expected[i]
                ));
            }
        }
        Ok(())
    }
}

/// Accumulates ψ into `F`, neighborhoods in ascending order.
fn sum_psi(nbr: &Neighborhoods, psi: &[f64], n: usize) -> Vec<f64> {
    let mut f = vec![0.0; n];
    for j in 0..n {
        let base = nbr.offset(j);
        for (p, &i) in nbr.members(j).iter().enumerate() {
            f[i] += psi[base + p];
        }
    }
    f
}

/// Σ_j |∂_j|, the number of stored ψ messages.
pub fn count_defined_psi(nbr: &Neighborhoods) -> usize {
    nbr.total_size()
}

/// One synchronous EAP sweep.
///
/// Returns [`Error::Diverged`] once α, η or F stops being finite; `state`
/// then holds the overflowed sweep.
pub fn eap_iterate(
    s: &SimilarityMatrix,
    nbr: &Neighborhoods,
    q: &PenaltyVector,
    state: &mut EapMessages,
    damping: f64,
) -> Result<()> {
    let n = s.n();
    if state.n != n || nbr.n() != n || q.as_slice().len() != n {
        return Err(Error::Dimension(format!(
            "similarity {n}x{n}, messages {}x{}, neighborhoods {}, penalties {}",
            state.n,
            state.n,
            nbr.n(),
            q.as_slice().len()
        )));
    }
    if state.psi.len() != nbr.total_size() {
        return Err(Error::Dimension(format!(
            "{} psi messages for neighborhoods of total size {}",
            state.psi.len(),
            nbr.total_size()
        )));
    }
    if !(0.0..=1.0).contains(&damping) {
        return Err(Error::InvalidParam(format!("damping {damping}")));
    }
    let q = q.as_slice();

    // (1)+(2): β and η
    for i in 0..n {
        let row = i * n;
        if n == 1 {
            let fresh = 0.0f64.max(q[i]);
            state.eta[row] = damp(state.eta[row].max(q[i]), fresh, damping).max(q[i]);
            continue;
        }
        let fi = state.f[i];
        let (first, arg, second) = top_two((0..n).map(|k| {
            let b = s.get(i, k) + state.alpha[row + k];
            if k == i {
                b + fi
            } else {
                b
            }
        }));
        for j in 0..n {
            let competitor = if j == arg { second } else { first };
            let fresh = (-competitor).max(q[i]);
            // zero-initialised messages count as q_i when q_i > 0, and a
            // convex mix of two values ≥ q_i can round just below q_i
            state.eta[row + j] = damp(state.eta[row + j].max(q[i]), fresh, damping).max(q[i]);
        }
    }

    // (3)+(4): φ and ψ per neighborhood, then F from the damped ψ
    state.phi.clear();
    state.phi.extend(
        (0..n).map(|l| s.get(l, l) + state.alpha[l * n + l] + state.eta[l * n + l] + state.f[l]),
    );
    let mut phi_nb = Vec::new();
    for j in 0..n {
        let base = nbr.offset(j);
        let members = nbr.members(j);
        phi_nb.clear();
        phi_nb.extend(
            members
                .iter()
                .enumerate()
                .map(|(p, &l)| state.phi[l] - state.psi[base + p]),
        );
        let (first, arg, second) = top_two(phi_nb.iter().copied());
        for p in 0..members.len() {
            let competitor = if p == arg { second } else { first };
            let fresh = 0.0 - competitor.max(0.0);
            state.psi[base + p] = damp(state.psi[base + p], fresh, damping);
        }
    }
    state.f = sum_psi(nbr, &state.psi, n);

    // (5): ρ and positive column sums
    state.col_pos.iter_mut().for_each(|c| *c = 0.0);
    for i in 0..n {
        for j in 0..n {
            let mut r = s.get(i, j) + state.eta[i * n + j];
            if i == j {
                r += state.f[i];
            }
            state.rho[i * n + j] = r;
            if i != j {
                state.col_pos[j] += r.max(0.0);
            }
        }
    }

    // (6): α
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
    // large neighborhoods can feed F back into α and η without bound
    let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
    if !(finite(&state.alpha) && finite(&state.eta) && finite(&state.f)) {
        return Err(Error::Diverged(state.iteration));
    }
    debug_assert!(
        state
            .check_invariants(nbr, &PenaltyVector(q.to_vec()))
            .is_ok(),
        "{:?}",
        state.check_invariants(nbr, &PenaltyVector(q.to_vec()))
    );
    Ok(())
}

/// Runs EAP from zero messages with a constant penalty `params.q`.
pub fn eap_run(
    s: &SimilarityMatrix,
    nbr: &Neighborhoods,
    params: &EngineParams,
) -> Result<(BeliefMatrix, ConvergenceStatus)> {
    let q = PenaltyVector::constant(s.n(), params.q);
    eap_run_observed(s, nbr, &q, params, |_| {})
}

/// Runs EAP with per-point penalties, calling `observe` after every sweep.
pub fn eap_run_observed(
    s: &SimilarityMatrix,
    nbr: &Neighborhoods,
    q: &PenaltyVector,
    params: &EngineParams,
    mut observe: impl FnMut(&EapMessages),
) -> Result<(BeliefMatrix, ConvergenceStatus)> {
    params.validate()?;
    let n = s.n();
    let mut state = EapMessages::new(nbr);
    let mut tracker = ConvergenceTracker::new(params.convergence_window);
    for _ in 0..params.max_iters {
        eap_iterate(s, nbr, q, &mut state, params.damping)?;
        observe(&state);
        let diag = (0..n)
            .map(|k| s.get(k, k) + state.eta[k * n + k] + state.alpha[k * n + k] + state.f[k]);
        if tracker.observe(diag) {
            break;
        }
    }
    Ok((state.beliefs(s), tracker.status()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::build_neighborhoods;

    #[test]
    fn eta_is_clipped_at_q() {
        // row 0 over k ≠ j=2 has β = [1, 2]; q = −1 → η_02 = max(−2, −1) = −1
        let s = SimilarityMatrix::from_rows(vec![
            vec![1.0, 2.0, -5.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let nbr = Neighborhoods::singletons(3);
        let mut st = EapMessages::new(&nbr);
        let q = PenaltyVector::constant(3, -1.0);
        eap_iterate(&s, &nbr, &q, &mut st, 0.0).unwrap();
        assert_eq!(st.eta()[2], -1.0);
        // without clipping η_00 would be −2
        assert_eq!(st.eta()[0], -1.0);
    }

    #[test]
    fn psi_one_step() {
        // ∂_0 = {0, 1, 2}; diagonal φ inputs are 0 for point 0, 0.5 for
        // point 1 and −1 for point 2 after the first η update.
        let s = SimilarityMatrix::from_rows(vec![
            vec![-10.0, 0.0, 0.0],
            vec![0.0, -10.0, -100.0],
            vec![0.0, -100.0, -10.0],
        ])
        .unwrap();
        let nbr = build_neighborhoods(&s, -50.0);
        assert_eq!(nbr.members(0), &[0, 1, 2]);
        let mut st = EapMessages::new(&nbr);
        let q = PenaltyVector::constant(3, f64::NEG_INFINITY);
        eap_iterate(&s, &nbr, &q, &mut st, 0.0).unwrap();
        // η_00 = −max(0, 0) = 0 → φ_00 = −10
        // η_11 = −max(0, −100) = 0 → φ_10 = −10
        // generic check: ψ_00 = −max(0, max(φ_10, φ_20))
        let phi = |l: usize| s.get(l, l) + st.eta()[l * 3 + l];
        let expect = -(phi(1).max(phi(2)).max(0.0));
        assert_eq!(st.psi(&nbr, 0, 0).unwrap(), expect);
        assert!(st.psi(&nbr, 2, 1).is_err());
    }

    #[test]
    fn psi_formula_with_positive_candidate() {
        // φ_aj = 0.5, φ_bj = −1 → ψ_jj = −0.5
        let phis = [0.0, 0.5, -1.0];
        let (first, arg, second) = top_two(phis.iter().copied());
        let competitor = if arg == 0 { second } else { first };
        assert_eq!(0.0 - competitor.max(0.0), -0.5);
    }

    #[test]
    fn count_psi() {
        assert_eq!(count_defined_psi(&Neighborhoods::singletons(4)), 4);
        let s = SimilarityMatrix::from_fn(4, |_, _| 0.0);
        assert_eq!(count_defined_psi(&build_neighborhoods(&s, -1.0)), 16);
        // sizes {1, 2, 3}
        let s = SimilarityMatrix::from_rows(vec![
            vec![0.0, -9.0, -9.0],
            vec![-1.0, 0.0, -9.0],
            vec![-1.0, -1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(count_defined_psi(&build_neighborhoods(&s, -5.0)), 6);
    }

    #[test]
    fn dimension_checks() {
        let s = SimilarityMatrix::from_fn(3, |_, _| -1.0);
        let nbr = Neighborhoods::singletons(2);
        let mut st = EapMessages::new(&nbr);
        let q = PenaltyVector::constant(3, 0.0);
        assert!(eap_iterate(&s, &nbr, &q, &mut st, 0.5).is_err());
    }

    #[test]
    fn overlapping_neighborhoods_overflow_as_error() {
        // three near points, one shared neighborhood copied three times
        let s = SimilarityMatrix::from_fn(3, |i, j| {
            if i == j {
                -40.0
            } else {
                -1.0 - 0.1 * (i + j) as f64
            }
        });
        let nbr = build_neighborhoods(&s, -3.0);
        assert_eq!(nbr.total_size(), 9);
        let q = PenaltyVector::constant(3, -3.0);
        let mut st = EapMessages::new(&nbr);
        let err = (0..5000)
            .find_map(|_| eap_iterate(&s, &nbr, &q, &mut st, 0.5).err())
            .expect("messages keep growing");
        assert!(matches!(err, Error::Diverged(k) if k > 1), "{err:?}");
    }
}
