//! Input data: point sets, dense similarity matrices, ε-neighborhoods and
//! engine parameters, plus the percentile heuristics used to seed `q` and ε.

mod load;
mod synth;

pub use load::{load_points, load_similarity, parse_points, parse_similarity};
pub use synth::{gen_blobs, gen_half_moons, Generator, GENERATORS};

use crate::error::{Error, Result};

/// Points in D-dimensional Euclidean space with optional ground-truth labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
    labels: Option<Vec<i64>>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>, labels: Option<Vec<i64>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if !points.is_empty() && dim == 0 {
            return Err(Error::Dimension("points must have dimension >= 1".into()));
        }
        if let Some(bad) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::Dimension(format!(
                "point {bad} has dimension {}, expected {dim}",
                points[bad].len()
            )));
        }
        if let Some(l) = &labels {
            if l.len() != points.len() {
                return Err(Error::Dimension(format!(
                    "{} labels for {} points",
                    l.len(),
                    points.len()
                )));
            }
        }
        Ok(Self { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    /// Whitespace-separated text, one point per line, label last when present.
    /// Coordinates use the shortest round-trip representation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.points.iter().enumerate() {
            let mut fields: Vec<String> = p.iter().map(|v| format!("{v:?}")).collect();
            if let Some(l) = &self.labels {
                fields.push(l[i].to_string());
            }
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Dense, row-major n×n similarity matrix. The diagonal holds preferences.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Dimension(format!(
                "{} values for a {n}x{n} matrix",
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(i, j));
            }
        }
        Self { n, values }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {bad} has {} columns in a matrix with {n} rows",
                rows[bad].len()
            )));
        }
        Ok(Self {
            n,
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sets every diagonal entry to `preference`.
    pub fn set_preference(&mut self, preference: f64) {
        for i in 0..self.n {
            self.set(i, i, preference);
        }
    }

    pub fn with_preference(mut self, preference: f64) -> Self {
        self.set_preference(preference);
        self
    }

    /// All entries with i ≠ j, in row-major order.
    pub fn off_diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.n;
        self.values
            .iter()
            .enumerate()
            .filter(move |(idx, _)| idx / n != idx % n)
            .map(|(_, &v)| v)
    }

    /// Restriction to `indices` × `indices` with `preference` on the diagonal.
    pub fn submatrix(&self, indices: &[usize], preference: f64) -> Self {
        Self::from_fn(indices.len(), |a, b| {
            if a == b {
                preference
            } else {
                self.get(indices[a], indices[b])
            }
        })
    }

    /// Median of the off-diagonal entries, the customary AP preference.
    pub fn median_off_diagonal(&self) -> Option<f64> {
        let mut v: Vec<f64> = self.off_diagonal().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let m = v.len() / 2;
        Some(if v.len() % 2 == 1 {
            v[m]
        } else {
            0.5 * (v[m - 1] + v[m])
        })
    }
}

/// `s(i,j) = -||x_i - x_j||` off the diagonal, `preference` on it.
pub fn similarity_from_points(ps: &PointSet, preference: f64) -> SimilarityMatrix {
    let pts = ps.points();
    let n = pts.len();
    let mut s = SimilarityMatrix {
        n,
        values: vec![0.0; n * n],
    };
    for i in 0..n {
        s.set(i, i, preference);
        for j in (i + 1)..n {
            let d = pts[i]
                .iter()
                .zip(&pts[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            s.set(i, j, -d);
            s.set(j, i, -d);
        }
    }
    s
}

/// Nearest-rank percentile of the off-diagonal entries.
fn off_diagonal_percentile(s: &SimilarityMatrix, percentile: f64) -> Result<f64> {
    if s.n() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: s.n(),
        });
    }
    if !(0.0..=100.0).contains(&percentile) {
        return Err(Error::InvalidParam(format!(
            "percentile {percentile} outside [0, 100]"
        )));
    }
    let mut v: Vec<f64> = s.off_diagonal().collect();
    v.sort_by(f64::total_cmp);
    Ok(nearest_rank(&v, percentile))
}

fn nearest_rank(sorted: &[f64], percentile: f64) -> f64 {
    let rank = ((percentile / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Starting guess for the penalty: minus the X-th percentile of the
/// off-diagonal similarities, X usually in [90, 100].
pub fn suggest_q(s: &SimilarityMatrix, percentile: f64) -> Result<f64> {
    Ok(-off_diagonal_percentile(s, percentile)?)
}

/// Starting guess for ε: the X-th percentile of the off-diagonal
/// similarities, X usually in [95, 100].
pub fn suggest_epsilon(s: &SimilarityMatrix, percentile: f64) -> Result<f64> {
    off_diagonal_percentile(s, percentile)
}

/// ε-neighborhoods `∂_j = {k | s(j,k) > ε} ∪ {j}`, each sorted ascending.
///
/// Stored CSR-style so per-(i,j) message storage can be laid out in the same
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighborhoods {
    epsilon: f64,
    offsets: Vec<usize>,
    members: Vec<usize>,
}

impl Neighborhoods {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn members(&self, j: usize) -> &[usize] {
        &self.members[self.offsets[j]..self.offsets[j + 1]]
    }

    /// Start of neighborhood `j` in the flat member layout.
    pub(crate) fn offset(&self, j: usize) -> usize {
        self.offsets[j]
    }

    /// Σ_j |∂_j|.
    pub fn total_size(&self) -> usize {
        self.members.len()
    }

    /// Position of `i` in the flat layout if `i ∈ ∂_j`.
    pub fn position(&self, j: usize, i: usize) -> Option<usize> {
        self.members(j)
            .binary_search(&i)
            .ok()
            .map(|p| self.offsets[j] + p)
    }

    /// Every ∂_j = {j}; the G constraints become vacuous.
    pub fn singletons(n: usize) -> Self {
        Self {
            epsilon: f64::INFINITY,
            offsets: (0..=n).collect(),
            members: (0..n).collect(),
        }
    }
}

pub fn build_neighborhoods(s: &SimilarityMatrix, epsilon: f64) -> Neighborhoods {
    let n = s.n();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut members = Vec::new();
    offsets.push(0);
    for j in 0..n {
        let row = s.row(j);
        members.extend((0..n).filter(|&k| k == j || row[k] > epsilon));
        offsets.push(members.len());
    }
    Neighborhoods {
        epsilon,
        offsets,
        members,
    }
}

/// Parameters shared by the AP, EAP and SHAPE engines.
///
/// `preference` is applied to the similarity diagonal by the caller; the
/// engines read preferences from `s(i,i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineParams {
    pub preference: f64,
    /// Penalty per additional exemplar; `-inf` recovers AP.
    pub q: f64,
    pub epsilon: f64,
    /// Second-layer preference for SHAPE.
    pub p2: f64,
    pub damping: f64,
    pub max_iters: usize,
    pub convergence_window: usize,
}

impl Default for EngineParams {
    fn default() -> Self {
        Self {
            preference: 0.0,
            q: f64::NEG_INFINITY,
            epsilon: f64::INFINITY,
            p2: 0.0,
            damping: 0.5,
            max_iters: 1000,
            convergence_window: 25,
        }
    }
}

impl EngineParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.damping) {
            return Err(Error::InvalidParam(format!(
                "damping {} outside [0, 1)",
                self.damping
            )));
        }
        if self.convergence_window == 0 || self.max_iters < self.convergence_window {
            return Err(Error::InvalidParam(format!(
                "need max_iters ({}) >= convergence_window ({}) >= 1",
                self.max_iters, self.convergence_window
            )));
        }
        if self.q.is_nan() || self.q == f64::INFINITY {
            return Err(Error::InvalidParam(format!("q = {} not allowed", self.q)));
        }
        if self.epsilon.is_nan() || self.preference.is_nan() || self.p2.is_nan() {
            return Err(Error::InvalidParam("NaN parameter".into()));
        }
        Ok(())
    }
}
