use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: row {row}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("{0}: no points")]
    NoPoints(PathBuf),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("point {0} has an empty membership set")]
    EmptyMembership(usize),

    #[error("cluster {0} has zero size")]
    ZeroSizeCluster(usize),

    #[error("adjacency matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),

    #[error("psi requested for point {point} outside the neighborhood of {center}")]
    OutsideNeighborhood { point: usize, center: usize },

    #[error("messages overflowed at sweep {0}")]
    Diverged(usize),

    #[error("unknown generator `{0}` (available: blobs, half-moons)")]
    UnknownGenerator(String),

    #[error("result document has no assignment matrix")]
    MissingAssignment,

    #[error("point count mismatch: {0} vs {1}")]
    PointCountMismatch(usize, usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
