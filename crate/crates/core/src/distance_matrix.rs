//! Symmetric pairwise distance matrices and their CSV/JSON forms.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    entries: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct DistanceMatrixJson {
    labels: Vec<String>,
    entries: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    /// Wraps `entries` after checking symmetry, a zero diagonal and
    /// nonnegativity.
    pub fn new(labels: Vec<String>, entries: DMatrix<f64>) -> Result<Self> {
        let dm = DistanceMatrix { labels, entries };
        dm.validate()?;
        Ok(dm)
    }

    /// Evaluates `dist(i, j)` once per unordered pair `i < j`, in parallel.
    pub fn from_pairs<F>(labels: Vec<String>, dist: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<f64> + Sync,
    {
        let n = labels.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let values = pairs
            .par_iter()
            .map(|&(i, j)| dist(i, j))
            .collect::<Result<Vec<f64>>>()?;
        let mut entries = DMatrix::zeros(n, n);
        for (&(i, j), v) in pairs.iter().zip(values) {
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
        DistanceMatrix::new(labels, entries)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        if self.entries.nrows() != n || self.entries.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for a {}x{} matrix",
                n,
                self.entries.nrows(),
                self.entries.ncols()
            )));
        }
        for i in 0..n {
            if self.entries[(i, i)] != 0.0 {
                return Err(Error::InvalidArgument(format!("nonzero diagonal at {i}")));
            }
            for j in i + 1..n {
                let (a, b) = (self.entries[(i, j)], self.entries[(j, i)]);
                if a != b {
                    return Err(Error::InvalidArgument(format!("asymmetric at ({i}, {j})")));
                }
                if !(a >= 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "negative or NaN distance at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Applies `f` to every off-diagonal entry. `f` must map `0` to `0` and
    /// keep values nonnegative.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = self.len();
        let entries = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { f(self.entries[(i, j)]) });
        DistanceMatrix::new(self.labels.clone(), entries)
    }

    /// Triples `(i, j, k)` with `d(i,k) > d(i,j) + d(j,k) + tol·(1 + d(i,k))`.
    pub fn triangle_violations(&self, tol: f64) -> Vec<(usize, usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.get(i, k);
                    if lhs > self.get(i, j) + self.get(j, k) + tol * (1.0 + lhs) {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    /// CSV with header `label,<l_1>,...,<l_n>` and one row per label.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(l);
            for j in 0..self.len() {
                let _ = write!(out, ",{}", self.entries[(i, j)]);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty()).enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty distance matrix CSV".into(),
        })?;
        let labels: Vec<String> = header.split(',').skip(1).map(str::to_string).collect();
        let n = labels.len();
        let mut entries = DMatrix::zeros(n, n);
        let mut rows = 0;
        for (idx, line) in lines {
            let mut cells = line.split(',');
            let _label = cells.next();
            if rows >= n {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "more rows than labels".into(),
                });
            }
            let values = cells
                .map(|c| {
                    f64::from_str(c.trim()).map_err(|_| Error::Parse {
                        line: idx + 1,
                        msg: format!("malformed distance `{c}`"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.len() != n {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected {n} values, found {}", values.len()),
                });
            }
            for (j, v) in values.into_iter().enumerate() {
                entries[(rows, j)] = v;
            }
            rows += 1;
        }
        if rows != n {
            return Err(Error::Parse {
                line: rows + 1,
                msg: format!("expected {n} rows, found {rows}"),
            });
        }
        DistanceMatrix::new(labels, entries)
    }

    pub fn to_json(&self) -> Result<String> {
        let rows = (0..self.len())
            .map(|i| self.entries.row(i).iter().copied().collect())
            .collect();
        let j = DistanceMatrixJson {
            labels: self.labels.clone(),
            entries: rows,
        };
        Ok(serde_json::to_string_pretty(&j)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: DistanceMatrixJson = serde_json::from_str(text)?;
        let n = j.labels.len();
        if j.entries.len() != n || j.entries.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(
                "entries must be square with one row per label".into(),
            ));
        }
        let entries = DMatrix::from_fn(n, n, |r, c| j.entries[r][c]);
        DistanceMatrix::new(j.labels, entries)
    }
}
