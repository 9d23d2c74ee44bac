//! Competing graph-comparison methods: covariance descriptors, log trace
//! moments, top eigenvalues, graphlet distributions and the eigenpair-overlap
//! distance.

mod cov;
mod eigs;
mod graphlets;
mod wicker;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance_matrix::DistanceMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::{pairwise_distance_matrix, DistanceConfig};
use crate::moments::trace_moments;

pub use cov::{bhattacharyya_dist, cov_descriptor, default_jitter};
pub use eigs::{lanczos_top_k, top_k_eigenvalues, LanczosOptions, DENSE_EIGS_THRESHOLD};
pub use graphlets::{
    classify4, graphlet3_counts, graphlet3_distribution, graphlet4_distribution, graphlet_kernel, triangle_count,
};
pub use wicker::wicker_distance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Moment,
    Cov,
    Nclm,
    Eigs,
    Gk3,
    Gk4,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Moment,
        Method::Cov,
        Method::Nclm,
        Method::Eigs,
        Method::Gk3,
        Method::Gk4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Moment => "moment",
            Method::Cov => "cov",
            Method::Nclm => "nclm",
            Method::Eigs => "eigs",
            Method::Gk3 => "gk3",
            Method::Gk4 => "gk4",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method '{s}'")))
    }
}

/// Per-graph feature vector of a baseline method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub method: Method,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(method: Method, values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("{method} feature is not finite: {v}")));
        }
        Ok(FeatureVector { method, values })
    }

    pub fn distance(&self, other: &FeatureVector) -> Result<f64> {
        if self.method != other.method || self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} feature of length {} vs {} feature of length {}",
                self.method,
                self.values.len(),
                other.method,
                other.values.len()
            )));
        }
        Ok(euclidean(&self.values, &other.values))
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Lowest and highest NCLM trace-moment orders.
pub const NCLM_ORDERS: (usize, usize) = (2, 7);

/// Closed-walk count substituted for a zero trace before taking logs.
pub const NCLM_ZERO_TRACE_FLOOR: f64 = 0.5;

/// `[log(tr(A^i) / n^i)]` for `i = 2..=7`.
///
/// Bipartite graphs have no odd closed walks; a zero trace is replaced by
/// [`NCLM_ZERO_TRACE_FLOOR`] so that the vector stays finite and equal for
/// cospectral graphs. Edgeless graphs are rejected.
pub fn nclm_vector(g: &Graph) -> Result<FeatureVector> {
    let n = g.n() as f64;
    if g.m() == 0 {
        return Err(Error::InvalidArgument(
            "NCLM needs at least one edge (tr(A²) = 0)".into(),
        ));
    }
    let (lo, hi) = NCLM_ORDERS;
    let tm = trace_moments(g, hi)?;
    let values = (lo..=hi)
        .map(|i| {
            // trace moments are tr(A^i)/n
            let tr = (tm.values()[i] * n).round().max(NCLM_ZERO_TRACE_FLOOR);
            tr.ln() - i as f64 * n.ln()
        })
        .collect();
    FeatureVector::new(Method::Nclm, values)
}

pub fn eigs_vector(g: &Graph, k: usize) -> Result<FeatureVector> {
    FeatureVector::new(Method::Eigs, top_k_eigenvalues(g, k)?)
}

pub fn gk3_vector(g: &Graph) -> Result<FeatureVector> {
    FeatureVector::new(Method::Gk3, graphlet3_distribution(g)?)
}

pub fn gk4_vector(g: &Graph, samples: usize, seed: u64) -> Result<FeatureVector> {
    FeatureVector::new(Method::Gk4, graphlet4_distribution(g, samples, seed)?)
}

/// Settings for every method; each method reads only its own fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MethodParams {
    pub moment: DistanceConfig,
    pub cov_order: usize,
    pub cov_center: bool,
    /// `None` uses [`default_jitter`] per pair.
    pub cov_jitter: Option<f64>,
    pub eigs_k: usize,
    pub gk4_samples: usize,
    pub seed: u64,
}

impl Default for MethodParams {
    fn default() -> Self {
        MethodParams {
            moment: DistanceConfig::default(),
            cov_order: 4,
            cov_center: true,
            cov_jitter: None,
            eigs_k: 10,
            gk4_samples: 10_000,
            seed: 0,
        }
    }
}

/// Pairwise distance matrix of a corpus under one method. Per-graph work runs
/// in parallel across graphs; GK4 graph `i` is sampled with seed `seed + i`.
pub fn corpus_distance_matrix(
    gs: &[Graph],
    labels: Vec<String>,
    method: Method,
    params: &MethodParams,
) -> Result<DistanceMatrix> {
    if gs.len() < 2 {
        return Err(Error::InvalidArgument(
            "pairwise distances need at least two graphs".into(),
        ));
    }
    if labels.len() != gs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {} graphs",
            labels.len(),
            gs.len()
        )));
    }
    match method {
        Method::Moment => Ok(pairwise_distance_matrix(gs, labels, &params.moment)?.matrix),
        Method::Cov => {
            let descs = gs
                .par_iter()
                .map(|g| cov_descriptor(g, params.cov_order, params.cov_center))
                .collect::<Result<Vec<_>>>()?;
            DistanceMatrix::from_pairs(labels, |i, j| {
                let jitter = params
                    .cov_jitter
                    .unwrap_or_else(|| default_jitter(&descs[i], &descs[j]));
                bhattacharyya_dist(&descs[i], &descs[j], jitter)
            })
        }
        _ => {
            let feats = gs
                .par_iter()
                .enumerate()
                .map(|(i, g)| feature_vector(g, method, params, i as u64))
                .collect::<Result<Vec<_>>>()?;
            DistanceMatrix::from_pairs(labels, |i, j| feats[i].distance(&feats[j]))
        }
    }
}

/// Feature vector of a vector-valued method; `index` offsets the GK4 seed.
pub fn feature_vector(g: &Graph, method: Method, params: &MethodParams, index: u64) -> Result<FeatureVector> {
    match method {
        Method::Nclm => nclm_vector(g),
        Method::Eigs => eigs_vector(g, params.eigs_k),
        Method::Gk3 => gk3_vector(g),
        Method::Gk4 => gk4_vector(g, params.gk4_samples, params.seed.wrapping_add(index)),
        Method::Moment | Method::Cov => Err(Error::InvalidArgument(format!(
            "{method} compares matrices, not feature vectors"
        ))),
    }
}
