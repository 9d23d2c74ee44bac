//! Kernel k-means clustering and KNN classification over distance matrices.

mod accuracy;
mod kmeans;
mod knn;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance_matrix::DistanceMatrix;
use crate::error::{Error, Result};
use crate::graph::{generate_rewired, Graph};

pub use accuracy::{clustering_accuracy, EXHAUSTIVE_MAX_CLASSES};
pub use kmeans::{kernel_kmeans, KMeansOptions, KMeansResult};
pub use knn::{fold_assignment, knn_classify, knn_predict, KnnOptions, KnnReport};

/// Graphs with integer class labels.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledCorpus {
    pub graphs: Vec<Graph>,
    pub labels: Vec<usize>,
    pub names: Vec<String>,
}

/// One generator setting of a synthetic corpus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Setting {
    pub nv: usize,
    pub ne: usize,
    pub rho: f64,
}

impl LabeledCorpus {
    pub fn new(graphs: Vec<Graph>, labels: Vec<usize>, names: Vec<String>) -> Result<Self> {
        if graphs.len() != labels.len() || graphs.len() != names.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} graphs, {} labels, {} names",
                graphs.len(),
                labels.len(),
                names.len()
            )));
        }
        Ok(LabeledCorpus { graphs, labels, names })
    }

    /// `per_setting` rewired graphs for each setting, labeled by setting
    /// index. Graph `i` of the corpus uses seed `seed + i`.
    pub fn synthetic(settings: &[Setting], per_setting: usize, seed: u64) -> Result<Self> {
        let jobs: Vec<(usize, usize)> = (0..settings.len())
            .flat_map(|s| (0..per_setting).map(move |r| (s, r)))
            .collect();
        let graphs = jobs
            .par_iter()
            .enumerate()
            .map(|(i, &(s, _))| {
                let st = settings[s];
                generate_rewired(st.nv, st.ne, st.rho, seed.wrapping_add(i as u64))
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = jobs.iter().map(|&(s, _)| s).collect();
        let names = jobs
            .iter()
            .map(|&(s, r)| {
                let st = settings[s];
                format!("V{}_E{}_rho{}_{}", st.nv, st.ne, st.rho, r)
            })
            .collect();
        LabeledCorpus::new(graphs, labels, names)
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn class_count(&self) -> usize {
        let mut l = self.labels.clone();
        l.sort_unstable();
        l.dedup();
        l.len()
    }
}

/// `K_ij = exp(−D_ij)`.
pub fn kernel_from_distances(d: &DistanceMatrix) -> DMatrix<f64> {
    d.entries().map(|v| (-v).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterOutcome {
    pub accuracy: f64,
    pub assignment: Vec<usize>,
    pub objective: f64,
}

/// Kernel k-means on `exp(−D)` with one cluster per distinct label, scored
/// against the labels.
pub fn cluster_distances(d: &DistanceMatrix, labels: &[usize], opts: &KMeansOptions) -> Result<ClusterOutcome> {
    let mut classes = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let r = kernel_kmeans(&kernel_from_distances(d), classes.len(), opts)?;
    Ok(ClusterOutcome {
        accuracy: clustering_accuracy(&r.assignment, labels)?,
        assignment: r.assignment,
        objective: r.objective,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub degree: usize,
    pub k: usize,
    pub report: KnnReport,
}

/// KNN accuracy for every (degree, k) pair; `dists` holds one distance
/// matrix per degree. Returns the grid and the index of the best point
/// (highest mean accuracy, earliest in the grid on ties).
pub fn knn_sweep(
    dists: &[(usize, DistanceMatrix)],
    labels: &[usize],
    ks: &[usize],
    folds: usize,
    seed: u64,
) -> Result<(Vec<SweepPoint>, usize)> {
    if dists.is_empty() || ks.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs at least one degree and one k".into(),
        ));
    }
    let jobs: Vec<(usize, usize)> = (0..dists.len()).flat_map(|i| ks.iter().map(move |&k| (i, k))).collect();
    let grid = jobs
        .par_iter()
        .map(|&(i, k)| {
            let (degree, d) = &dists[i];
            Ok(SweepPoint {
                degree: *degree,
                k,
                report: knn_classify(d, labels, &KnnOptions { k, folds, seed })?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = (0..grid.len())
        .max_by(|&a, &b| {
            grid[a]
                .report
                .accuracy_mean
                .total_cmp(&grid[b].report.accuracy_mean)
                .then(b.cmp(&a))
        })
        .unwrap();
    Ok((grid, best))
}

/// Experiment summary written by the clustering and classification harnesses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub task: String,
    pub method: String,
    pub params: serde_json::Value,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub per_fold: Vec<f64>,
}
