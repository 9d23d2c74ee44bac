//! Moment sequences `m_k = φ(A^k)` of an adjacency matrix under a state `φ`.
//!
//! The uniform vector state `φ_e(X) = ⟨e, X e⟩` with `e = 1/√n` is the
//! scalable path: `K` sparse products of `A` with the all-ones vector. The
//! normalized trace `tr(X)/n` sees only the spectrum; general vector states
//! and the permutation-invariant density states `ρ = pI + qJ` are here for
//! comparison and for the invariance checks.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Above this many vertices the trace moments switch from a dense
/// eigendecomposition to per-vertex walk extraction.
pub const DEFAULT_TRACE_DENSE_THRESHOLD: usize = 2048;

const SYMMETRY_TOL: f64 = 1e-10;
const UNIT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum StateKind {
    UniformVector,
    Trace,
    CustomVector,
    Density { p: f64, q: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    pub state: StateKind,
    pub values: Vec<f64>,
}

impl MomentSequence {
    pub fn new(state: StateKind, values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        MomentSequence { state, values }
    }

    /// Highest available order `K`.
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, k: usize) -> Option<f64> {
        self.values.get(k).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Coefficients of the density matrix `ρ = pI + qJ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityParams {
    pub p: f64,
    pub q: f64,
}

impl DensityParams {
    /// Validates unit trace `n(p + q) = 1` and positivity (`p ≥ 0`,
    /// `p + qn ≥ 0`) for a graph on `n` vertices.
    pub fn new(p: f64, q: f64, n: usize) -> Result<Self> {
        let nf = n as f64;
        let tol = 1e-12;
        if n == 0 || !p.is_finite() || !q.is_finite() {
            return Err(Error::InvalidArgument(
                "density state needs n ≥ 1 and finite p, q".into(),
            ));
        }
        if (nf * (p + q) - 1.0).abs() > tol {
            return Err(Error::InvalidArgument(format!(
                "density state must have unit trace: n(p+q) = {}",
                nf * (p + q)
            )));
        }
        if p < -tol || p + q * nf < -tol {
            return Err(Error::InvalidArgument(format!(
                "density state pI + qJ with p={p}, q={q} is not positive semidefinite"
            )));
        }
        Ok(DensityParams { p, q })
    }

    /// `ρ = I/n`, the normalized trace.
    pub fn trace(n: usize) -> Self {
        DensityParams {
            p: 1.0 / n as f64,
            q: 0.0,
        }
    }

    /// `ρ = J/n`, the uniform vector state.
    pub fn uniform(n: usize) -> Self {
        DensityParams {
            p: 0.0,
            q: 1.0 / n as f64,
        }
    }
}

fn require_vertices(g: &Graph) -> Result<()> {
    if g.n() == 0 {
        return Err(Error::InvalidArgument("state undefined on the empty graph".into()));
    }
    Ok(())
}

/// Moments in the uniform vector state, `m_k = 1ᵀ A^k 1 / n` for `k = 0..=order`.
///
/// Exactly `order` sparse products; `O(order·|E|)` time and `O(|V| + |E|)` space.
pub fn vector_state_moments(g: &Graph, order: usize) -> Result<MomentSequence> {
    require_vertices(g)?;
    let n = g.n() as f64;
    let mut w = vec![1.0; g.n()];
    let mut next = vec![0.0; g.n()];
    let mut values = Vec::with_capacity(order + 1);
    values.push(1.0);
    for _ in 0..order {
        g.mul_vec_into(&w, &mut next);
        std::mem::swap(&mut w, &mut next);
        values.push(w.iter().sum::<f64>() / n);
    }
    Ok(MomentSequence::new(StateKind::UniformVector, values))
}

/// Normalized trace moments `tr(A^k) / n`.
pub fn trace_moments(g: &Graph, order: usize) -> Result<MomentSequence> {
    trace_moments_with(g, order, DEFAULT_TRACE_DENSE_THRESHOLD)
}

/// Normalized trace moments with an explicit dense/sparse switch point.
///
/// At or below `dense_threshold` vertices the spectrum is computed densely and
/// `Σ λ^k` is rounded to the nearest integer, since `tr(A^k)` counts closed
/// walks. Above it, each diagonal entry `(A^k)_ii` is read off local walks
/// from vertex `i`, which costs `O(n · order · |E|)` in the worst case.
pub fn trace_moments_with(g: &Graph, order: usize, dense_threshold: usize) -> Result<MomentSequence> {
    require_vertices(g)?;
    let traces = if g.n() <= dense_threshold {
        dense_closed_walks(g, order)
    } else {
        sparse_closed_walks(g, order)
    };
    let n = g.n() as f64;
    let values = traces.into_iter().map(|t| t / n).collect();
    Ok(MomentSequence::new(StateKind::Trace, values))
}

fn dense_closed_walks(g: &Graph, order: usize) -> Vec<f64> {
    let eig = SymmetricEigen::new(g.to_dense());
    (0..=order)
        .map(|k| {
            let t: f64 = eig.eigenvalues.iter().map(|l| l.powi(k as i32)).sum();
            t.round()
        })
        .collect()
}

/// `tr(A^k)` via `(A^k)_ii = ⟨A^a e_i, A^b e_i⟩` with `a + b = k`, so only
/// `⌈order/2⌉` products per vertex are needed.
fn sparse_closed_walks(g: &Graph, order: usize) -> Vec<f64> {
    let n = g.n();
    let half = order.div_ceil(2);
    let per_vertex: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map_init(
            || vec![vec![0.0; n]; half + 1],
            |powers, i| {
                powers[0].iter_mut().for_each(|x| *x = 0.0);
                powers[0][i] = 1.0;
                for s in 1..=half {
                    let (done, rest) = powers.split_at_mut(s);
                    g.mul_vec_into(&done[s - 1], &mut rest[0]);
                }
                (0..=order)
                    .map(|k| {
                        let a = k / 2;
                        let b = k - a;
                        powers[a].iter().zip(&powers[b]).map(|(x, y)| x * y).sum()
                    })
                    .collect()
            },
        )
        .collect();
    let mut traces = vec![0.0; order + 1];
    for row in per_vertex {
        for (t, v) in traces.iter_mut().zip(row) {
            *t += v;
        }
    }
    traces
}

pub(crate) fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    for i in 0..n {
        for j in i + 1..n {
            if (a[(i, j)] - a[(j, i)]).abs() > SYMMETRY_TOL {
                return Err(Error::InvalidArgument(format!("matrix not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

pub(crate) fn check_unit(xi: &DVector<f64>, n: usize) -> Result<()> {
    if xi.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "state vector of length {} for {n}x{n} matrix",
            xi.len()
        )));
    }
    let norm = xi.norm();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidArgument(format!(
            "state vector has norm {norm}, expected 1"
        )));
    }
    Ok(())
}

/// Moments `ξᵀ A^k ξ` of a dense symmetric matrix in the vector state `ξ`.
pub fn xi_state_moments(a: &DMatrix<f64>, xi: &DVector<f64>, order: usize) -> Result<MomentSequence> {
    check_symmetric(a)?;
    check_unit(xi, a.nrows())?;
    let mut w = xi.clone();
    let mut values = Vec::with_capacity(order + 1);
    values.push(xi.dot(xi));
    for _ in 0..order {
        w = a * &w;
        values.push(xi.dot(&w));
    }
    Ok(MomentSequence::new(StateKind::CustomVector, values))
}

/// Moments `tr(ρ A^k)` for `ρ = pI + qJ`:
/// `m_k = p·tr(A^k) + q·1ᵀA^k1`.
pub fn density_state_moments(g: &Graph, d: DensityParams, order: usize) -> Result<MomentSequence> {
    require_vertices(g)?;
    let d = DensityParams::new(d.p, d.q, g.n())?;
    let n = g.n() as f64;
    let tr = trace_moments(g, order)?;
    let vec = vector_state_moments(g, order)?;
    let values = tr
        .values
        .iter()
        .zip(&vec.values)
        .map(|(t, v)| n * d.p * t + n * d.q * v)
        .collect();
    Ok(MomentSequence::new(StateKind::Density { p: d.p, q: d.q }, values))
}
