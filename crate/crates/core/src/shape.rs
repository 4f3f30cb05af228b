//! Two-layer clustering: the penalty-relaxed first layer proposes potential
//! local exemplars, a plain AP layer over those exemplars merges the ones
//! that sit too close together, and every assignment is remapped through the
//! second-layer choice.
//!
//! This is the greedy variant: the layers run one after the other and the
//! first layer's decision is final.

use std::collections::HashMap;

use crate::ap::{ap_decide, ap_run};
use crate::decision::{decide, finalize, AssignmentMatrix, ClusteringResult};
use crate::eap::{eap_run_observed, PenaltyVector};
use crate::error::Result;
use crate::ingest::{EngineParams, Neighborhoods, SimilarityMatrix};
use crate::msg::ConvergenceStatus;

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeResult {
    /// Potential local exemplars over all points.
    pub layer1: ClusteringResult,
    /// AP over the layer-1 exemplars, indexed by position in
    /// `layer1.exemplars`.
    pub layer2: ClusteringResult,
    /// `(potential exemplar, its layer-2 exemplar)`, both as point indices,
    /// in ascending order of the potential exemplar.
    pub remap: Vec<(usize, usize)>,
    pub final_result: ClusteringResult,
    pub layer1_status: ConvergenceStatus,
    pub layer2_status: ConvergenceStatus,
}

impl ShapeResult {
    pub fn remap_of(&self, j: usize) -> Option<usize> {
        self.remap
            .binary_search_by_key(&j, |&(from, _)| from)
            .ok()
            .map(|p| self.remap[p].1)
    }
}

/// Runs both layers. `s` carries the layer-1 preference on its diagonal;
/// `params.q` is the layer-1 penalty and `params.p2` the layer-2 preference.
pub fn shape_run(s: &SimilarityMatrix, params: &EngineParams) -> Result<ShapeResult> {
    shape_run_with_penalties(s, &PenaltyVector::constant(s.n(), params.q), params)
}

pub fn shape_run_with_penalties(
    s: &SimilarityMatrix,
    q: &PenaltyVector,
    params: &EngineParams,
) -> Result<ShapeResult> {
    let n = s.n();
    let nbr = Neighborhoods::singletons(n);
    let (b1, layer1_status) = eap_run_observed(s, &nbr, q, params, |_| {})?;
    let layer1 = decide(s, &b1);

    let potential = layer1.exemplars.clone();
    let s2 = s.submatrix(&potential, params.p2);
    let (b2, layer2_status) = ap_run(&s2, params)?;
    let layer2 = ap_decide(&s2, &b2);

    let remap: Vec<(usize, usize)> = potential
        .iter()
        .enumerate()
        .map(|(a, &j)| (j, potential[layer2.exemplar_lists[a][0]]))
        .collect();
    let target: HashMap<usize, usize> = remap.iter().copied().collect();

    let mut h2 = AssignmentMatrix::new(n);
    for i in 0..n {
        for &j in &layer1.exemplar_lists[i] {
            h2.set(i, target[&j], true);
        }
    }
    let final_result = finalize(s, h2);

    Ok(ShapeResult {
        layer1,
        layer2,
        remap,
        final_result,
        layer1_status,
        layer2_status,
    })
}
