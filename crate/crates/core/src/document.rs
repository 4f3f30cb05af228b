//! The JSON result document written by `eapcluster cluster` and read back by
//! `localview` and `eval`. Field order is fixed, so identical runs produce
//! byte-identical files. Non-finite reals are written as the strings
//! `"inf"` / `"-inf"`.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::decision::{AssignmentMatrix, ClusteringResult};
use crate::error::{Error, Result};
use crate::localview::{exemplar_count_histogram, LocalViewReport};
use crate::metrics::ScoreTriple;
use crate::msg::ConvergenceStatus;

pub const FORMAT: &str = "eapcluster-result/1";

/// A real number that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            ser.serialize_f64(self.0)
        } else if self.0 > 0.0 {
            ser.serialize_str("inf")
        } else if self.0 < 0.0 {
            ser.serialize_str("-inf")
        } else {
            ser.serialize_str("nan")
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct RealVisitor;
        impl Visitor<'_> for RealVisitor {
            type Value = Real;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or \"inf\" / \"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Real, E> {
                Ok(Real(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Real, E> {
                f64::from_str(v).map(Real).map_err(E::custom)
            }
        }
        de.deserialize_any(RealVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ap,
    Eap,
    Shape,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ap => "ap",
            Mode::Eap => "eap",
            Mode::Shape => "shape",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InputSpec {
    Points {
        path: String,
        label_column: Option<usize>,
    },
    Similarity {
        path: String,
    },
    Generator {
        spec: String,
        seed: u64,
    },
}

/// Inclusive, evenly spaced grid `lo:hi:steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * k as f64 / last
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(format!("expected lo:hi:steps, got `{s}`"));
        };
        let lo: f64 = lo.parse().map_err(|_| format!("bad grid start `{lo}`"))?;
        let hi: f64 = hi.parse().map_err(|_| format!("bad grid end `{hi}`"))?;
        let steps: usize = steps
            .parse()
            .map_err(|_| format!("bad grid steps `{steps}`"))?;
        if steps == 0 {
            return Err("a grid needs at least one step".into());
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Err("grid bounds must be finite".into());
        }
        Ok(Grid { lo, hi, steps })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepGrids {
    pub preference: Option<Grid>,
    pub q: Option<Grid>,
    pub epsilon: Option<Grid>,
    pub p2: Option<Grid>,
}

impl SweepGrids {
    pub fn is_empty(&self) -> bool {
        self.preference.is_none() && self.q.is_none() && self.epsilon.is_none() && self.p2.is_none()
    }
}

/// Echo of the configuration that produced a document. For a sweep, the
/// scalar parameters are those of the selected grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub input: InputSpec,
    pub preference: Real,
    pub q: Real,
    pub epsilon: Option<Real>,
    pub p2: Option<Real>,
    pub damping: f64,
    pub max_iters: usize,
    pub convergence_window: usize,
    pub percentile_q: Option<f64>,
    pub percentile_eps: Option<f64>,
    pub sweep: Option<SweepGrids>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub cluster: usize,
    pub exemplar_count: usize,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub exemplar_a: usize,
    pub exemplar_b: usize,
    pub cluster: usize,
    pub shared_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalViewTables {
    pub fanout: usize,
    pub exemplar_counts: Vec<HistogramRow>,
    pub pair_strengths: Vec<PairRow>,
}

impl LocalViewTables {
    pub fn build(res: &ClusteringResult, report: &LocalViewReport, fanout: usize) -> Self {
        Self {
            fanout,
            exemplar_counts: exemplar_count_histogram(res)
                .into_iter()
                .map(|((cluster, exemplar_count), points)| HistogramRow {
                    cluster,
                    exemplar_count,
                    points,
                })
                .collect(),
            pair_strengths: report
                .pair_strength
                .iter()
                .map(|(&(a, b), &shared_points)| PairRow {
                    exemplar_a: a,
                    exemplar_b: b,
                    cluster: report.cluster_of_exemplar[&a],
                    shared_points,
                })
                .collect(),
        }
    }

    pub fn counts_tsv(&self) -> String {
        let mut out = String::from("cluster\texemplar_count\tpoints\n");
        for r in &self.exemplar_counts {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                r.cluster, r.exemplar_count, r.points
            ));
        }
        out
    }

    pub fn pairs_tsv(&self) -> String {
        let mut out = String::from("exemplar_a\texemplar_b\tcluster\tshared_points\n");
        for r in &self.pair_strengths {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.exemplar_a, r.exemplar_b, r.cluster, r.shared_points
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub preference: Real,
    pub q: Real,
    pub epsilon: Option<Real>,
    pub p2: Option<Real>,
    pub n_clusters: usize,
    pub n_exemplars: usize,
    pub converged: bool,
    pub accuracy: Option<f64>,
    /// Set when the engine failed at this point (other fields are then zero).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub format: String,
    pub config: RunConfig,
    pub n_points: usize,
    pub n_clusters: usize,
    pub exemplars: Vec<usize>,
    pub exemplar_lists: Vec<Vec<usize>>,
    pub cluster_ids: Vec<usize>,
    /// Rows of the assignment matrix `H` as lists of set columns.
    pub assignment: Option<Vec<Vec<usize>>>,
    /// One status per engine layer.
    pub convergence: Vec<ConvergenceStatus>,
    pub scores: Option<ScoreTriple>,
    pub local_view: Option<LocalViewTables>,
    pub pruned_with: Option<usize>,
    pub sweep: Option<Vec<SweepRow>>,
}

impl ResultDocument {
    pub fn new(
        config: RunConfig,
        res: &ClusteringResult,
        convergence: Vec<ConvergenceStatus>,
    ) -> Self {
        Self {
            format: FORMAT.to_string(),
            config,
            n_points: res.n(),
            n_clusters: res.n_clusters(),
            exemplars: res.exemplars.clone(),
            exemplar_lists: res.exemplar_lists.clone(),
            cluster_ids: res.cluster_ids.clone(),
            assignment: Some(res.assignment().row_lists()),
            convergence,
            scores: None,
            local_view: None,
            pruned_with: None,
            sweep: None,
        }
    }

    pub fn converged(&self) -> bool {
        self.convergence.iter().all(|c| c.converged)
    }

    pub fn assignment_matrix(&self) -> Result<AssignmentMatrix> {
        let rows = self.assignment.as_ref().ok_or(Error::MissingAssignment)?;
        if rows.len() != self.n_points {
            return Err(Error::PointCountMismatch(rows.len(), self.n_points));
        }
        AssignmentMatrix::from_row_lists(rows)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.format != FORMAT {
            return Err(Error::InvalidParam(format!(
                "unsupported document format `{}`",
                doc.format
            )));
        }
        if doc.cluster_ids.len() != doc.n_points || doc.exemplar_lists.len() != doc.n_points {
            return Err(Error::PointCountMismatch(
                doc.cluster_ids.len(),
                doc.n_points,
            ));
        }
        Ok(doc)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values() {
        let g: Grid = "-3:1:5".parse().unwrap();
        assert_eq!(g.values(), vec![-3.0, -2.0, -1.0, 0.0, 1.0]);
        let g: Grid = "2:9:1".parse().unwrap();
        assert_eq!(g.values(), vec![2.0]);
        assert!("1:2".parse::<Grid>().is_err());
        assert!("1:2:0".parse::<Grid>().is_err());
    }

    #[test]
    fn infinite_reals_round_trip() {
        let v = vec![Real(f64::NEG_INFINITY), Real(f64::INFINITY), Real(-0.25)];
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"["-inf","inf",-0.25]"#);
        let back: Vec<Real> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}
