use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

use crate::error::{Error, Result};

/// Largest class count for which every bijection is enumerated.
pub const EXHAUSTIVE_MAX_CLASSES: usize = 6;

fn dense_ids(ids: &[usize]) -> (Vec<usize>, usize) {
    let mut seen: Vec<usize> = ids.to_vec();
    seen.sort_unstable();
    seen.dedup();
    let mapped = ids.iter().map(|id| seen.binary_search(id).unwrap()).collect();
    (mapped, seen.len())
}

/// Square contingency table `table[cluster][label]`, zero-padded.
fn contingency(assignment: &[usize], labels: &[usize]) -> Vec<Vec<i64>> {
    let (a, ka) = dense_ids(assignment);
    let (l, kl) = dense_ids(labels);
    let size = ka.max(kl);
    let mut table = vec![vec![0i64; size]; size];
    for (&c, &y) in a.iter().zip(&l) {
        table[c][y] += 1;
    }
    table
}

fn best_exhaustive(table: &[Vec<i64>]) -> i64 {
    fn go(table: &[Vec<i64>], row: usize, used: &mut Vec<bool>) -> i64 {
        if row == table.len() {
            return 0;
        }
        let mut best = i64::MIN;
        for col in 0..table.len() {
            if !used[col] {
                used[col] = true;
                best = best.max(table[row][col] + go(table, row + 1, used));
                used[col] = false;
            }
        }
        best
    }
    go(table, 0, &mut vec![false; table.len()])
}

fn best_hungarian(table: &[Vec<i64>]) -> i64 {
    let size = table.len();
    let m = Matrix::from_fn(size, size, |(r, c)| table[r][c]);
    kuhn_munkres(&m).0
}

/// Fraction of items whose cluster maps to their label under the best
/// bijection between cluster ids and label ids. Ids need not be contiguous.
pub fn clustering_accuracy(assignment: &[usize], labels: &[usize]) -> Result<f64> {
    if assignment.len() != labels.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} assignments for {} labels",
            assignment.len(),
            labels.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::InvalidArgument("accuracy of an empty labeling".into()));
    }
    let table = contingency(assignment, labels);
    let matched = if table.len() <= EXHAUSTIVE_MAX_CLASSES {
        best_exhaustive(&table)
    } else {
        best_hungarian(&table)
    };
    Ok(matched as f64 / labels.len() as f64)
}
