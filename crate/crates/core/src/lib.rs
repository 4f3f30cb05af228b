//! Exemplar-based clustering by max-sum message passing.
//!
//! The crate implements standard Affinity Propagation ([`ap`]) and two
//! extensions that let a point attach to several *local* exemplars:
//!
//! * [`eap`] relaxes the one-exemplar-per-point constraint with a penalty `q`
//!   and keeps local exemplars apart with ε-neighborhood constraints;
//! * [`shape`] runs the relaxed first layer and merges nearby potential
//!   exemplars with a second, plain AP layer.
//!
//! Clusters are the connected components of the symmetrized assignment
//! matrix ([`decision`]). [`localview`] exposes the per-point and
//! per-exemplar-pair structure inside each cluster and [`metrics`] scores a
//! clustering against ground truth (sensitivity, PPV, accuracy).

pub mod ap;
pub mod cli;
pub mod decision;
pub mod document;
pub mod eap;
mod error;
pub mod ingest;
pub mod localview;
pub mod metrics;
mod msg;
pub mod shape;

pub use error::{Error, Result};

pub use ap::{ap_decide, ap_iterate, ap_run, ap_run_observed, ApMessages};
pub use decision::{connected_components, decide, AssignmentMatrix, ClusteringResult};
pub use eap::{
    count_defined_psi, eap_iterate, eap_run, eap_run_observed, EapMessages, PenaltyVector,
};
pub use ingest::{
    build_neighborhoods, gen_blobs, gen_half_moons, load_points, load_similarity,
    similarity_from_points, suggest_epsilon, suggest_q, EngineParams, Neighborhoods, PointSet,
    SimilarityMatrix,
};
pub use metrics::{contingency, score, ContingencyTable, ScoreTriple};
pub use msg::{BeliefMatrix, ConvergenceStatus};
pub use shape::{shape_run, ShapeResult};
