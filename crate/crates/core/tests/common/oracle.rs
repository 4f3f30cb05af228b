//! Brute-force references for message updates and the AP objective.

use eapcluster::{
    build_neighborhoods, eap_iterate, EapMessages, Neighborhoods, PenaltyVector, SimilarityMatrix,
};
use rand::Rng;

use super::{random_similarity, rng};

/// `η_ij` for one row by brute force: the row factor requires at least one
/// selected entry and pays `q` for every selected entry.
pub fn eta_by_enumeration(beta: &[f64], j: usize, q: f64) -> f64 {
    let n = beta.len();
    let mut best = [f64::NEG_INFINITY; 2];
    for mask in 1u32..(1 << n) {
        let hj = ((mask >> j) & 1) as usize;
        let mut v = 0.0;
        for l in 0..n {
            if (mask >> l) & 1 == 1 {
                v += q;
                if l != j {
                    v += beta[l];
                }
            }
        }
        best[hj] = best[hj].max(v);
    }
    best[1] - best[0]
}

/// `ψ_ij` by brute force over the diagonal variables of `∂_j` under
/// "at most one exemplar in the neighborhood". `phi[a]` belongs to the
/// `a`-th member and `me` is the position of `i`.
pub fn psi_by_enumeration(phi: &[f64], me: usize) -> f64 {
    let m = phi.len();
    let mut best = [f64::NEG_INFINITY; 2];
    // at most one bit set: the empty setting or a single member
    for chosen in std::iter::once(None).chain((0..m).map(Some)) {
        let hi = (chosen == Some(me)) as usize;
        let v = match chosen {
            Some(c) if c != me => phi[c],
            _ => 0.0,
        };
        best[hi] = best[hi].max(v);
    }
    best[1] - best[0]
}

pub struct Snapshot {
    pub alpha: Vec<f64>,
    pub f: Vec<f64>,
    pub psi: Vec<Vec<f64>>,
}

/// Random EAP instance advanced a few damped sweeps, so the messages that
/// feed the final sweep are arbitrary rather than zero.
pub fn warmed_up(seed: u64) -> (SimilarityMatrix, Neighborhoods, PenaltyVector, EapMessages) {
    let mut r = rng(seed);
    let n = r.random_range(2..=6);
    let s = random_similarity(&mut r, n);
    let eps = -r.random_range(0.0..10.0);
    let nbr = build_neighborhoods(&s, eps);
    let q = PenaltyVector::new((0..n).map(|_| r.random_range(-6.0..3.0)).collect()).unwrap();
    let mut state = EapMessages::new(&nbr);
    for _ in 0..r.random_range(0..6) {
        eap_iterate(&s, &nbr, &q, &mut state, 0.5).unwrap();
    }
    (s, nbr, q, state)
}

pub fn snapshot(state: &EapMessages, nbr: &Neighborhoods) -> Snapshot {
    let n = state.n();
    Snapshot {
        alpha: state.alpha().to_vec(),
        f: state.f().to_vec(),
        psi: (0..n)
            .map(|j| {
                nbr.members(j)
                    .iter()
                    .map(|&i| state.psi(nbr, i, j).unwrap())
                    .collect()
            })
            .collect(),
    }
}

/// Value of an assignment `c` (exemplar of each point) under the AP
/// objective; `None` when some exemplar does not choose itself.
pub fn objective(s: &SimilarityMatrix, c: &[usize]) -> Option<f64> {
    if c.iter().any(|&k| c[k] != k) {
        return None;
    }
    Some((0..c.len()).map(|i| s.get(i, c[i])).sum())
}

pub fn brute_force_optimum(s: &SimilarityMatrix) -> f64 {
    let n = s.n();
    let mut best = f64::NEG_INFINITY;
    let mut c = vec![0usize; n];
    let total = n.pow(n as u32);
    for code in 0..total {
        let mut x = code;
        for ci in c.iter_mut() {
            *ci = x % n;
            x /= n;
        }
        if let Some(v) = objective(s, &c) {
            best = best.max(v);
        }
    }
    best
}

/// Groups of points 100 apart along a line, each within a unit disc.
/// Every entry is scaled by its own factor in [1, 1.05) so that mirror-image
/// pairs do not form exact ties.
pub fn separated_instance(seed: u64) -> SimilarityMatrix {
    let mut r = rng(seed);
    let n = r.random_range(2..=5);
    let groups = r.random_range(1..=n.min(3));
    let pts: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let g = (i % groups) as f64;
            let t = r.random_range(0.0..std::f64::consts::TAU);
            let rad = r.random_range(0.0..1.0);
            [100.0 * g + rad * t.cos(), rad * t.sin()]
        })
        .collect();
    let dist = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    SimilarityMatrix::from_fn(n, |i, j| {
        if i == j {
            -20.0
        } else {
            -dist(pts[i], pts[j]) * r.random_range(1.0..1.05)
        }
    })
}
