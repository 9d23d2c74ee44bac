use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance_matrix::DistanceMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KnnOptions {
    pub k: usize,
    pub folds: usize,
    pub seed: u64,
}

impl Default for KnnOptions {
    fn default() -> Self {
        KnnOptions {
            k: 1,
            folds: 10,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnReport {
    pub accuracy_mean: f64,
    /// Population standard deviation across folds.
    pub accuracy_std: f64,
    pub per_fold: Vec<f64>,
    /// False when some class had fewer members than folds.
    pub stratified: bool,
}

/// Fold index per item. Each class is shuffled and dealt round-robin,
/// continuing the deal across classes so fold sizes stay balanced.
pub fn fold_assignment(labels: &[usize], folds: usize, seed: u64) -> (Vec<usize>, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_class.entry(l).or_default().push(i);
    }
    let stratified = by_class.values().all(|m| m.len() >= folds);
    let groups: Vec<Vec<usize>> = if stratified {
        by_class.into_values().collect()
    } else {
        vec![(0..labels.len()).collect()]
    };
    let mut fold = vec![0; labels.len()];
    let mut next = 0;
    for mut members in groups {
        members.shuffle(&mut rng);
        for i in members {
            fold[i] = next % folds;
            next += 1;
        }
    }
    (fold, stratified)
}

/// Majority label among the `k` nearest training items. Ties between labels
/// go to the label of the nearest neighbor among the tied ones.
pub fn knn_predict(d: &DistanceMatrix, labels: &[usize], train: &[usize], x: usize, k: usize) -> usize {
    let mut order: Vec<usize> = train.to_vec();
    order.sort_by(|&a, &b| d.get(x, a).total_cmp(&d.get(x, b)).then(a.cmp(&b)));
    let near = &order[..k.min(order.len())];
    let mut votes: BTreeMap<usize, usize> = BTreeMap::new();
    for &y in near {
        *votes.entry(labels[y]).or_default() += 1;
    }
    let top = *votes.values().max().unwrap();
    near.iter().map(|&y| labels[y]).find(|l| votes[l] == top).unwrap()
}

/// Cross-validated KNN accuracy over a precomputed distance matrix.
pub fn knn_classify(d: &DistanceMatrix, labels: &[usize], opts: &KnnOptions) -> Result<KnnReport> {
    let n = d.len();
    if labels.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {n} items",
            labels.len()
        )));
    }
    if opts.folds < 2 || opts.k == 0 {
        return Err(Error::InvalidArgument(format!(
            "need folds ≥ 2 and k ≥ 1, got folds = {}, k = {}",
            opts.folds, opts.k
        )));
    }
    if n < opts.folds {
        return Err(Error::InvalidArgument(format!(
            "{n} items cannot fill {} folds",
            opts.folds
        )));
    }
    let (fold, stratified) = fold_assignment(labels, opts.folds, opts.seed);
    let per_fold: Vec<f64> = (0..opts.folds)
        .into_par_iter()
        .map(|f| {
            let (test, train): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| fold[i] == f);
            let correct = test
                .iter()
                .filter(|&&x| knn_predict(d, labels, &train, x, opts.k) == labels[x])
                .count();
            correct as f64 / test.len() as f64
        })
        .collect();
    let mean = per_fold.iter().sum::<f64>() / per_fold.len() as f64;
    let var = per_fold.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / per_fold.len() as f64;
    Ok(KnnReport {
        accuracy_mean: mean,
        accuracy_std: var.sqrt(),
        per_fold,
        stratified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn block_distances(labels: &[usize], inside: f64, across: f64) -> DistanceMatrix {
        let n = labels.len();
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else if labels[i] == labels[j] {
                inside
            } else {
                across
            }
        });
        DistanceMatrix::new(crate::metrics::default_labels(n), m).unwrap()
    }

    #[test]
    fn separable_classes() {
        let labels: Vec<usize> = (0..40).map(|i| i % 2).collect();
        let d = block_distances(&labels, 0.0, 5.0);
        for k in [1, 3, 5] {
            let r = knn_classify(
                &d,
                &labels,
                &KnnOptions {
                    k,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(r.accuracy_mean, 1.0);
            assert!(r.stratified);
            assert_eq!(r.per_fold.len(), 10);
        }
    }

    #[test]
    fn duplicate_at_distance_zero() {
        let labels = [0, 0, 1, 1];
        let d = block_distances(&labels, 0.0, 1.0);
        assert_eq!(knn_predict(&d, &labels, &[1, 2, 3], 0, 1), 0);
    }

    #[test]
    fn tie_goes_to_nearest() {
        let labels = [0, 1, 2, 1, 2];
        let m = DMatrix::from_row_slice(
            5,
            5,
            &[
                0.0, 3.0, 1.0, 4.0, 2.0, //
                3.0, 0.0, 1.0, 1.0, 1.0, //
                1.0, 1.0, 0.0, 1.0, 1.0, //
                4.0, 1.0, 1.0, 0.0, 1.0, //
                2.0, 1.0, 1.0, 1.0, 0.0,
            ],
        );
        let d = DistanceMatrix::new(crate::metrics::default_labels(5), m).unwrap();
        // neighbors of 0 in order: 2 (label 2), 4 (label 2), 1 (label 1), 3 (label 1)
        assert_eq!(knn_predict(&d, &labels, &[1, 2, 3, 4], 0, 4), 2);
        assert_eq!(knn_predict(&d, &labels, &[1, 3, 4], 0, 2), 2);
    }

    #[test]
    fn indistinguishable_classes_near_half() {
        let labels: Vec<usize> = (0..200).map(|i| i % 2).collect();
        let d = block_distances(&labels, 1.0, 1.0);
        let mut total = 0.0;
        for seed in 0..20 {
            let r = knn_classify(&d, &labels, &KnnOptions { k: 1, folds: 10, seed }).unwrap();
            total += r.accuracy_mean;
        }
        // nearest neighbor is the lowest index: a fixed, label-independent choice
        let mean = total / 20.0;
        assert!((0.35..=0.65).contains(&mean), "{mean}");
    }

    #[test]
    fn small_class_falls_back() {
        let labels = [0, 0, 0, 0, 0, 0, 1, 1];
        let d = block_distances(&labels, 0.0, 1.0);
        let r = knn_classify(
            &d,
            &labels,
            &KnnOptions {
                k: 1,
                folds: 4,
                seed: 0,
            },
        )
        .unwrap();
        assert!(!r.stratified);
    }

    #[test]
    fn stratified_folds_balance_classes() {
        let labels: Vec<usize> = (0..60).map(|i| i % 3).collect();
        let (fold, strat) = fold_assignment(&labels, 10, 4);
        assert!(strat);
        for f in 0..10 {
            for c in 0..3 {
                let cnt = (0..60).filter(|&i| fold[i] == f && labels[i] == c).count();
                assert_eq!(cnt, 2);
            }
        }
    }

    #[test]
    fn deterministic() {
        let labels: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let n = labels.len();
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else {
                ((i * 7 + j * 7) % 11) as f64 + 1.0
            }
        });
        let d = DistanceMatrix::new(crate::metrics::default_labels(n), m).unwrap();
        let o = KnnOptions {
            k: 3,
            folds: 5,
            seed: 9,
        };
        assert_eq!(
            knn_classify(&d, &labels, &o).unwrap(),
            knn_classify(&d, &labels, &o).unwrap()
        );
    }
}
