#![allow(dead_code)]

pub mod oracle;

use eapcluster::{ApMessages, EapMessages, Neighborhoods, PenaltyVector, SimilarityMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform similarities in [-10, 0) off the diagonal, not necessarily
/// symmetric, preference uniform in [-10, 0).
pub fn random_similarity(rng: &mut ChaCha8Rng, n: usize) -> SimilarityMatrix {
    SimilarityMatrix::from_fn(n, |_, _| -rng.random_range(0.0..10.0))
}

pub fn assert_ap_invariants(state: &ApMessages) {
    if let Err(e) = state.check_invariants() {
        panic!("AP sweep {}: {e}", state.iteration());
    }
}

pub fn assert_eap_invariants(state: &EapMessages, nbr: &Neighborhoods, q: &PenaltyVector) {
    if let Err(e) = state.check_invariants(nbr, q) {
        panic!("EAP sweep {}: {e}", state.iteration());
    }
}
