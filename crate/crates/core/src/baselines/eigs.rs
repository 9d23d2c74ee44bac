//! Largest adjacency eigenvalues: dense for small graphs, Lanczos otherwise.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::sym_eigenvalues;

pub const DENSE_EIGS_THRESHOLD: usize = 2048;

#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    /// Ritz pair accepted when `β · |s_last| ≤ tol · max(1, |θ_max|)`.
    pub tol: f64,
    /// Largest Krylov dimension tried before giving up.
    pub max_dim: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tol: 1e-8,
            max_dim: 1000,
            seed: 0x5eed,
        }
    }
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    for _ in 0..2 {
        orthogonalize(&mut v, basis);
    }
    let norm = dot(&v, &v).sqrt();
    (norm > 1e-10).then(|| v.into_iter().map(|x| x / norm).collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for q in basis {
        let c = dot(v, q);
        v.iter_mut().zip(q).for_each(|(x, qi)| *x -= c * qi);
    }
}

/// The `k` algebraically largest eigenvalues of `A`, descending, via Lanczos
/// with full reorthogonalization.
///
/// When the Krylov space becomes invariant, iteration continues from a fresh
/// random vector orthogonal to the basis, so repeated eigenvalues are found
/// once the space grows large enough.
pub fn lanczos_top_k(g: &Graph, k: usize, opts: &LanczosOptions) -> Result<Vec<f64>> {
    let n = g.n();
    let k = k.min(n);
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut q = random_unit(n, &mut rng, &basis).expect("n ≥ 1");
    let mut target = (2 * k + 20).max(40).min(n);
    let mut exhausted = false;

    loop {
        while basis.len() < target {
            let mut w = g.mul_vec(&q);
            let alpha = dot(&w, &q);
            basis.push(q.clone());
            alphas.push(alpha);
            for _ in 0..2 {
                orthogonalize(&mut w, &basis);
            }
            let beta = dot(&w, &w).sqrt();
            if basis.len() == n {
                betas.push(0.0);
                exhausted = true;
                break;
            }
            let scale = alphas.iter().fold(1.0f64, |m, a| m.max(a.abs()));
            if beta <= 1e-10 * scale {
                betas.push(0.0);
                match random_unit(n, &mut rng, &basis) {
                    Some(v) => q = v,
                    None => {
                        exhausted = true;
                        break;
                    }
                }
            } else {
                betas.push(beta);
                q = w.into_iter().map(|x| x / beta).collect();
            }
        }

        let m = basis.len();
        let t = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alphas[i]
            } else if i + 1 == j {
                betas[i]
            } else if j + 1 == i {
                betas[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let last_beta = betas[m - 1];
        let theta_max = eig.eigenvalues.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        let top = &order[..k.min(m)];
        let worst = top
            .iter()
            .map(|&i| (last_beta * eig.eigenvectors[(m - 1, i)]).abs())
            .fold(0.0, f64::max);
        if exhausted || (top.len() == k && worst <= opts.tol * theta_max) {
            return Ok(top.iter().map(|&i| eig.eigenvalues[i]).collect());
        }
        if m >= opts.max_dim.min(n) {
            return Err(Error::NoConvergence {
                iterations: m,
                residual: worst,
            });
        }
        target = (2 * m).min(opts.max_dim).min(n);
    }
}

/// The `k` largest eigenvalues (algebraic order), zero-padded to length `k`.
pub fn top_k_eigenvalues(g: &Graph, k: usize) -> Result<Vec<f64>> {
    let mut vals = if g.n() <= DENSE_EIGS_THRESHOLD {
        let mut v = sym_eigenvalues(&g.to_dense());
        v.reverse();
        v.truncate(k);
        v
    } else {
        lanczos_top_k(g, k, &LanczosOptions::default())?
    };
    vals.resize(k, 0.0);
    Ok(vals)
}
