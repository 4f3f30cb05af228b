use std::fs;
use std::path::Path;

use super::{PointSet, SimilarityMatrix};
use crate::error::{Error, Result};

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|f| !f.is_empty())
}

/// Numeric rows of a text file; blank lines and `#` comments are skipped.
/// Row numbers in errors are 1-based line numbers.
fn numeric_rows(path: &Path, text: &str) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = idx + 1;
        let values = fields(line)
            .map(|f| {
                f.parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    row,
                    message: format!("non-numeric field `{f}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((row, values));
    }
    Ok(rows)
}

fn check_rectangular(path: &Path, rows: &[(usize, Vec<f64>)]) -> Result<usize> {
    let width = rows.first().map_or(0, |(_, r)| r.len());
    if let Some((row, r)) = rows.iter().find(|(_, r)| r.len() != width) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            row: *row,
            message: format!("expected {width} fields, found {}", r.len()),
        });
    }
    Ok(width)
}

/// Parses point-file text. `label_column` selects a 0-based integer column
/// holding ground-truth labels; the remaining columns are coordinates.
pub fn parse_points(path: &Path, text: &str, label_column: Option<usize>) -> Result<PointSet> {
    let rows = numeric_rows(path, text)?;
    if rows.is_empty() {
        return Err(Error::NoPoints(path.to_path_buf()));
    }
    let width = check_rectangular(path, &rows)?;
    let min_width = if label_column.is_some() { 2 } else { 1 };
    if let Some(col) = label_column {
        if col >= width {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                row: rows[0].0,
                message: format!("label column {col} out of range for {width} fields"),
            });
        }
    }
    if width < min_width {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            row: rows[0].0,
            message: "no coordinate columns".into(),
        });
    }

    let mut points = Vec::with_capacity(rows.len());
    let mut labels = label_column.map(|_| Vec::with_capacity(rows.len()));
    for (row, mut values) in rows {
        if let (Some(col), Some(labels)) = (label_column, labels.as_mut()) {
            let raw = values.remove(col);
            if raw.fract() != 0.0 || !raw.is_finite() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    row,
                    message: format!("label `{raw}` is not an integer"),
                });
            }
            labels.push(raw as i64);
        }
        points.push(values);
    }
    PointSet::new(points, labels)
}

pub fn load_points(path: impl AsRef<Path>, label_column: Option<usize>) -> Result<PointSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_points(path, &text, label_column)
}

/// Parses a dense n×n matrix. The diagonal is kept as read; callers
/// normally overwrite it with a preference.
pub fn parse_similarity(path: &Path, text: &str) -> Result<SimilarityMatrix> {
    let rows = numeric_rows(path, text)?;
    if rows.is_empty() {
        return Err(Error::NoPoints(path.to_path_buf()));
    }
    let width = check_rectangular(path, &rows)?;
    if width != rows.len() {
        return Err(Error::Dimension(format!(
            "{}: {} rows x {width} columns is not square",
            path.display(),
            rows.len()
        )));
    }
    SimilarityMatrix::from_rows(rows.into_iter().map(|(_, r)| r).collect())
}

pub fn load_similarity(path: impl AsRef<Path>) -> Result<SimilarityMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_similarity(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("mem")
    }

    #[test]
    fn points_with_labels() {
        let ps = parse_points(p(), "0 0 1\n1 0 1\n5 5 2\n", Some(2)).unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps.dim(), 2);
        assert_eq!(ps.labels(), Some(&[1, 1, 2][..]));
        assert_eq!(ps.points()[2], vec![5.0, 5.0]);
    }

    #[test]
    fn comma_separated() {
        let ps = parse_points(p(), "1.5,2\n3, 4\n", None).unwrap();
        assert_eq!(ps.points(), &[vec![1.5, 2.0], vec![3.0, 4.0]]);
    }

    #[test]
    fn empty_file() {
        let err = parse_points(p(), "\n\n", None).unwrap_err();
        assert!(err.to_string().contains("no points"));
    }

    #[test]
    fn non_numeric_names_row() {
        let err = parse_points(p(), "a b\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, .. }), "{err}");
    }

    #[test]
    fn ragged_names_row() {
        let err = parse_points(p(), "1 2\n3 4\n5\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 3, .. }), "{err}");
    }

    #[test]
    fn similarity_shapes() {
        let s = parse_similarity(p(), "0 -1\n-1 0\n").unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(s.get(0, 1), -1.0);
        assert!(matches!(
            parse_similarity(p(), "0 1 2\n3 4 5\n"),
            Err(Error::Dimension(_))
        ));
        let one = parse_similarity(p(), "0\n").unwrap();
        assert_eq!(one.n(), 1);
    }
}
