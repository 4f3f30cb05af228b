//! Message updates and decisions checked against exhaustive enumeration.

mod common;

use common::oracle::*;
use eapcluster::{ap_decide, ap_run, eap_iterate, EngineParams};

const TOL: f64 = 1e-9;

#[test]
fn eta_matches_enumeration() {
    for seed in 0..200 {
        let (s, nbr, q, mut state) = warmed_up(seed);
        let n = s.n();
        let before = snapshot(&state, &nbr);
        eap_iterate(&s, &nbr, &q, &mut state, 0.0).unwrap();
        for i in 0..n {
            let beta: Vec<f64> = (0..n)
                .map(|k| {
                    let diag = if k == i { before.f[i] } else { 0.0 };
                    s.get(i, k) + before.alpha[i * n + k] + diag
                })
                .collect();
            for j in 0..n {
                let want = eta_by_enumeration(&beta, j, q.as_slice()[i]);
                let got = state.eta()[i * n + j];
                assert!(
                    (got - want).abs() <= TOL,
                    "seed {seed} eta[{i},{j}]: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn psi_matches_enumeration() {
    let mut checked = 0;
    for seed in 1000..1200 {
        let (s, nbr, q, mut state) = warmed_up(seed);
        let n = s.n();
        let before = snapshot(&state, &nbr);
        eap_iterate(&s, &nbr, &q, &mut state, 0.0).unwrap();
        for j in 0..n {
            let members = nbr.members(j);
            assert!(members.len() <= 6);
            let phi: Vec<f64> = members
                .iter()
                .enumerate()
                .map(|(a, &l)| {
                    s.get(l, l) + before.alpha[l * n + l] + state.eta()[l * n + l] + before.f[l]
                        - before.psi[j][a]
                })
                .collect();
            for (a, &i) in members.iter().enumerate() {
                let want = psi_by_enumeration(&phi, a);
                let got = state.psi(&nbr, i, j).unwrap();
                assert!(
                    (got - want).abs() <= TOL,
                    "seed {seed} psi[{i},{j}]: {got} vs {want}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 200);
}

#[test]
fn psi_enumeration_sanity() {
    assert_eq!(psi_by_enumeration(&[2.0, -1.0, 0.5], 0), -0.5);
    assert_eq!(psi_by_enumeration(&[2.0, -1.0, 0.5], 2), -2.0);
    assert_eq!(psi_by_enumeration(&[3.0], 0), 0.0);
    assert_eq!(eta_by_enumeration(&[0.0, -2.0, -5.0], 0, -10.0), 2.0);
    assert_eq!(eta_by_enumeration(&[0.0, -2.0, -5.0], 0, 3.0), 3.0);
}

#[test]
fn ap_attains_brute_force_optimum() {
    for seed in 0..25 {
        let s = separated_instance(seed);
        let (b, status) = ap_run(&s, &EngineParams::default()).unwrap();
        assert!(status.converged, "seed {seed}");
        let res = ap_decide(&s, &b);
        assert!(res.exemplar_lists.iter().all(|l| l.len() == 1));
        let c: Vec<usize> = res.exemplar_lists.iter().map(|l| l[0]).collect();
        let got = objective(&s, &c).expect("consistent assignment");
        let want = brute_force_optimum(&s);
        assert!(
            (got - want).abs() <= TOL,
            "seed {seed}: {got} vs optimum {want}"
        );
    }
}
