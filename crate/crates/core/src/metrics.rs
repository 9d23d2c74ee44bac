//! Distances between positive (semi)definite moment matrices, and the graph
//! distance built on them.
//!
//! Moment matrices of small or highly symmetric graphs are often singular
//! (their spectral distribution has few atoms), so metrics that need a
//! positive definite argument fall back to the Frobenius distance when either
//! side is numerically singular. The fallback is reported, not hidden.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Cholesky, DMatrix};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance_matrix::DistanceMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hankel::{build_moment_matrix, MomentMatrix, DEFAULT_DEGREE};
use crate::linalg::{sym_apply, sym_eigenvalues, symmetrize};
use crate::moments::vector_state_moments;

/// A matrix is singular when `λ_min ≤ SINGULAR_REL_TOL · tr`.
pub const SINGULAR_REL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Frobenius,
    AffineInvariant,
    LogFrobenius,
    CholeskyFrobenius,
    JDivergence,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::Frobenius,
        Metric::AffineInvariant,
        Metric::LogFrobenius,
        Metric::CholeskyFrobenius,
        Metric::JDivergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Frobenius => "frobenius",
            Metric::AffineInvariant => "affine-invariant",
            Metric::LogFrobenius => "log-frobenius",
            Metric::CholeskyFrobenius => "cholesky-frobenius",
            Metric::JDivergence => "j-divergence",
        }
    }

    pub fn requires_pd(self) -> bool {
        self != Metric::Frobenius
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown metric `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    #[default]
    None,
    /// `ψ(x) = ln(1 + x)`.
    Log1p,
}

impl Scaling {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Scaling::None => x,
            Scaling::Log1p => x.ln_1p(),
        }
    }
}

impl FromStr for Scaling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Scaling::None),
            "log1p" => Ok(Scaling::Log1p),
            _ => Err(Error::InvalidArgument(format!("unknown scaling `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceConfig {
    pub degree: usize,
    pub metric: Metric,
    /// Added to the diagonal of both matrices before comparing.
    pub eps: f64,
    pub scaling: Scaling,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig {
            degree: DEFAULT_DEGREE,
            metric: Metric::AffineInvariant,
            eps: 0.0,
            scaling: Scaling::None,
        }
    }
}

impl DistanceConfig {
    pub fn frobenius(degree: usize) -> Self {
        DistanceConfig {
            degree,
            metric: Metric::Frobenius,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::InvalidArgument("moment matrix degree must be at least 1".into()));
        }
        if !(self.eps >= 0.0) || !self.eps.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "regularization {} must be finite and ≥ 0",
                self.eps
            )));
        }
        Ok(())
    }
}

fn same_shape(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<()> {
    if a.shape() != b.shape() || !a.is_square() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    Ok(())
}

/// Errors with the smallest eigenvalue unless `λ_min > SINGULAR_REL_TOL · tr(a)`.
pub fn check_positive_definite(a: &DMatrix<f64>) -> Result<()> {
    let min = sym_eigenvalues(a).first().copied().unwrap_or(0.0);
    if !(min > SINGULAR_REL_TOL * a.trace().abs()) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    Ok(())
}

/// Entrywise Euclidean distance `‖a − b‖_F`.
pub fn frobenius_dist(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    same_shape(a, b)?;
    Ok((a - b).norm())
}

/// Geodesic distance `‖log(a^{-1/2} b a^{-1/2})‖_F` of the affine-invariant metric.
pub fn affine_invariant_dist(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    same_shape(a, b)?;
    check_positive_definite(a)?;
    check_positive_definite(b)?;
    if a == b {
        // W = I exactly; forming it numerically costs cond(a)·ε
        return Ok(0.0);
    }
    let inv_sqrt = sym_apply(a, |x| 1.0 / x.sqrt());
    let mut w = &inv_sqrt * b * &inv_sqrt;
    symmetrize(&mut w);
    let ss: f64 = sym_eigenvalues(&w).iter().map(|l| l.ln().powi(2)).sum();
    Ok(ss.sqrt())
}

/// `‖log a − log b‖_F`.
pub fn log_frobenius_dist(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    same_shape(a, b)?;
    check_positive_definite(a)?;
    check_positive_definite(b)?;
    Ok((sym_apply(a, f64::ln) - sym_apply(b, f64::ln)).norm())
}

fn cholesky_factor(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_positive_definite(a)?;
    Cholesky::new(a.clone())
        .map(|c| c.l())
        .ok_or(Error::NotPositiveDefinite { min_eigenvalue: 0.0 })
}

/// `‖chol(a) − chol(b)‖_F` with lower-triangular factors.
pub fn cholesky_frobenius_dist(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    same_shape(a, b)?;
    Ok((cholesky_factor(a)? - cholesky_factor(b)?).norm())
}

/// `½ · sqrt(tr(a⁻¹b + b⁻¹a) − 2k)` for `k × k` matrices.
pub fn j_divergence_dist(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    same_shape(a, b)?;
    check_positive_definite(a)?;
    check_positive_definite(b)?;
    if a == b {
        return Ok(0.0);
    }
    let not_pd = || Error::NotPositiveDefinite { min_eigenvalue: 0.0 };
    let ca = Cholesky::new(a.clone()).ok_or_else(not_pd)?;
    let cb = Cholesky::new(b.clone()).ok_or_else(not_pd)?;
    let t = ca.solve(b).trace() + cb.solve(a).trace() - 2.0 * a.nrows() as f64;
    Ok(0.5 * t.max(0.0).sqrt())
}

pub fn matrix_distance(a: &DMatrix<f64>, b: &DMatrix<f64>, metric: Metric) -> Result<f64> {
    match metric {
        Metric::Frobenius => frobenius_dist(a, b),
        Metric::AffineInvariant => affine_invariant_dist(a, b),
        Metric::LogFrobenius => log_frobenius_dist(a, b),
        Metric::CholeskyFrobenius => cholesky_frobenius_dist(a, b),
        Metric::JDivergence => j_divergence_dist(a, b),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDistance {
    pub value: f64,
    /// Metric that produced `value`.
    pub metric: Metric,
    /// True when the configured metric needed positive definite input and
    /// Frobenius was used instead.
    pub fell_back: bool,
}

/// The degree-`d` moment matrix of `g` in the uniform vector state.
pub fn graph_moment_matrix(g: &Graph, degree: usize) -> Result<MomentMatrix> {
    build_moment_matrix(&vector_state_moments(g, 2 * degree)?, degree)
}

/// Compares two moment matrices under `cfg`: regularize, measure (falling
/// back to Frobenius on singular input), then scale.
pub fn moment_matrix_distance(a: &MomentMatrix, b: &MomentMatrix, cfg: &DistanceConfig) -> Result<GraphDistance> {
    cfg.validate()?;
    let (mut a, mut b) = (a.entries().clone(), b.entries().clone());
    if cfg.eps > 0.0 {
        for i in 0..a.nrows() {
            a[(i, i)] += cfg.eps;
        }
        for i in 0..b.nrows() {
            b[(i, i)] += cfg.eps;
        }
    }
    let (raw, metric, fell_back) = match matrix_distance(&a, &b, cfg.metric) {
        Ok(v) => (v, cfg.metric, false),
        Err(Error::NotPositiveDefinite { .. }) if cfg.metric.requires_pd() => {
            (frobenius_dist(&a, &b)?, Metric::Frobenius, true)
        }
        Err(e) => return Err(e),
    };
    Ok(GraphDistance {
        value: cfg.scaling.apply(raw),
        metric,
        fell_back,
    })
}

/// `d(G, G̃) = δ(M_d(G), M_d(G̃))`.
pub fn graph_distance(g1: &Graph, g2: &Graph, cfg: &DistanceConfig) -> Result<GraphDistance> {
    cfg.validate()?;
    let a = graph_moment_matrix(g1, cfg.degree)?;
    let b = graph_moment_matrix(g2, cfg.degree)?;
    moment_matrix_distance(&a, &b, cfg)
}

#[derive(Clone, Debug)]
pub struct PairwiseDistances {
    pub matrix: DistanceMatrix,
    /// Unordered pairs that fell back to Frobenius.
    pub fallback_pairs: usize,
}

/// All pairwise graph distances. Moment matrices are computed once per graph
/// (in parallel), then every unordered pair is compared (in parallel).
pub fn pairwise_distance_matrix(gs: &[Graph], labels: Vec<String>, cfg: &DistanceConfig) -> Result<PairwiseDistances> {
    cfg.validate()?;
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
    let mats = gs
        .par_iter()
        .map(|g| graph_moment_matrix(g, cfg.degree))
        .collect::<Result<Vec<_>>>()?;
    pairwise_from_moment_matrices(&mats, labels, cfg)
}

pub fn pairwise_from_moment_matrices(
    mats: &[MomentMatrix],
    labels: Vec<String>,
    cfg: &DistanceConfig,
) -> Result<PairwiseDistances> {
    let fallbacks = std::sync::atomic::AtomicUsize::new(0);
    let matrix = DistanceMatrix::from_pairs(labels, |i, j| {
        let d = moment_matrix_distance(&mats[i], &mats[j], cfg)?;
        if d.fell_back {
            fallbacks.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        }
        Ok(d.value)
    })?;
    Ok(PairwiseDistances {
        matrix,
        fallback_pairs: fallbacks.into_inner(),
    })
}

/// Labels `g0, g1, ...`.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("g{i}")).collect()
}
