//! Explicit spectral distributions of symmetric matrices in vector states.
//!
//! For symmetric `A = Σ λ_i P_i` (spectral projections `P_i`) and a unit
//! vector `ξ`, the distribution is `μ = Σ ω_i δ_{λ_i}` with
//! `ω_i = ‖P_i ξ‖²`, the squared cosine between `ξ` and the `λ_i`
//! eigenspace. Its `k`-th moment is `ξᵀ A^k ξ`. This is a dense, desk-scale
//! computation used to cross-check the moment pipeline.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::sym_eigen_sorted;
use crate::moments::{check_symmetric, check_unit};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub lambda: f64,
    pub omega: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct SpectralOptions {
    /// Eigenvalues closer than `merge_rel_tol · max|λ|` share an atom.
    pub merge_rel_tol: f64,
    /// Atoms with weight at or below this are dropped.
    pub weight_floor: f64,
    /// Largest matrix handled densely.
    pub dense_threshold: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            merge_rel_tol: 1e-8,
            weight_floor: 1e-12,
            dense_threshold: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
    merge_tol: f64,
}

impl DiscreteMeasure {
    /// Validates nonnegative weights summing to one (within `1e-10`) and atom
    /// separation greater than `merge_tol`. Atoms are stored by location.
    pub fn new(mut atoms: Vec<Atom>, merge_tol: f64) -> Result<Self> {
        atoms.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        if atoms.iter().any(|a| !(a.omega >= 0.0) || !a.lambda.is_finite()) {
            return Err(Error::InvalidArgument(
                "atom weights must be nonnegative and locations finite".into(),
            ));
        }
        let total: f64 = atoms.iter().map(|a| a.omega).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "atom weights sum to {total}, expected 1"
            )));
        }
        if atoms.windows(2).any(|w| w[1].lambda - w[0].lambda <= merge_tol) {
            return Err(Error::InvalidArgument("atoms closer than merge tolerance".into()));
        }
        Ok(DiscreteMeasure { atoms, merge_tol })
    }

    /// The point mass `δ_λ`.
    pub fn dirac(lambda: f64) -> Self {
        DiscreteMeasure {
            atoms: vec![Atom { lambda, omega: 1.0 }],
            merge_tol: 0.0,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn merge_tol(&self) -> f64 {
        self.merge_tol
    }

    /// Number of mass points.
    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn moment(&self, k: usize) -> f64 {
        measure_moment(self, k)
    }

    pub fn moments(&self, order: usize) -> Vec<f64> {
        (0..=order).map(|k| self.moment(k)).collect()
    }

    /// Stem-plot data with header `lambda,omega`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,omega\n");
        for a in &self.atoms {
            let _ = writeln!(out, "{},{}", a.lambda, a.omega);
        }
        out
    }

    /// Largest location and weight discrepancy against `other`, or `None`
    /// when the supports differ in size.
    pub fn max_discrepancy(&self, other: &DiscreteMeasure) -> Option<f64> {
        (self.atoms.len() == other.atoms.len()).then(|| {
            self.atoms
                .iter()
                .zip(&other.atoms)
                .map(|(a, b)| (a.lambda - b.lambda).abs().max((a.omega - b.omega).abs()))
                .fold(0.0, f64::max)
        })
    }
}

/// `∫ x^k dμ = Σ ω_i λ_i^k`.
pub fn measure_moment(mu: &DiscreteMeasure, k: usize) -> f64 {
    mu.atoms.iter().map(|a| a.omega * a.lambda.powi(k as i32)).sum()
}

/// Spectral distribution of symmetric `a` in the vector state `xi`.
pub fn spectral_measure(a: &DMatrix<f64>, xi: &DVector<f64>, opts: &SpectralOptions) -> Result<DiscreteMeasure> {
    check_symmetric(a)?;
    check_unit(xi, a.nrows())?;
    if a.nrows() > opts.dense_threshold {
        return Err(Error::InvalidArgument(format!(
            "{} vertices exceeds the dense threshold {}; use the moment pipeline",
            a.nrows(),
            opts.dense_threshold
        )));
    }
    if a.nrows() == 0 {
        return Err(Error::InvalidArgument("spectral measure of an empty matrix".into()));
    }
    let (values, vectors) = sym_eigen_sorted(a);
    let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let merge_tol = opts.merge_rel_tol * max_abs;

    let mut atoms: Vec<Atom> = Vec::new();
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] <= merge_tol {
            end += 1;
        }
        let lambda = values[start..end].iter().sum::<f64>() / (end - start) as f64;
        let omega: f64 = (start..end).map(|c| vectors.column(c).dot(xi).powi(2)).sum();
        if omega > opts.weight_floor {
            atoms.push(Atom { lambda, omega });
        }
        start = end;
    }
    Ok(DiscreteMeasure { atoms, merge_tol })
}

/// Distribution of a graph's adjacency matrix in the uniform state `1/√n`.
pub fn graph_spectral_measure(g: &Graph, opts: &SpectralOptions) -> Result<DiscreteMeasure> {
    if g.n() > opts.dense_threshold {
        return Err(Error::InvalidArgument(format!(
            "{} vertices exceeds the dense threshold {}; use the moment pipeline",
            g.n(),
            opts.dense_threshold
        )));
    }
    let n = g.n();
    let e = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    spectral_measure(&g.to_dense(), &e, opts)
}

/// Builds a symmetric matrix whose distribution in the state `xi` is `mu`.
///
/// With `v = (√ω_i)` and a Householder reflection `H` taking `v` to `xi`, the
/// matrix `H diag(λ) Hᵀ` has exactly the requested atoms and weights.
pub fn matrix_with_measure(mu: &DiscreteMeasure, xi: &DVector<f64>) -> Result<DMatrix<f64>> {
    let n = mu.atoms.len();
    check_unit(xi, n)?;
    let v = DVector::from_iterator(n, mu.atoms.iter().map(|a| a.omega.sqrt()));
    let diff = &v - xi;
    let h = if diff.norm() < 1e-14 {
        DMatrix::identity(n, n)
    } else {
        let w = diff.normalize();
        DMatrix::identity(n, n) - (&w * w.transpose()) * 2.0
    };
    let lambdas = DVector::from_iterator(n, mu.atoms.iter().map(|a| a.lambda));
    let mut a = &h * DMatrix::from_diagonal(&lambdas) * h.transpose();
    crate::linalg::symmetrize(&mut a);
    Ok(a)
}
