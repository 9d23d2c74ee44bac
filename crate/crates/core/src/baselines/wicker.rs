use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::sym_eigen_sorted;

const ZERO_TOL: f64 = 1e-10;

/// Eigenpair-overlap distance
/// `Σ_{i,j} (λ_i − μ_j)² / (λ_i + μ_j) · |⟨u_i, v_j⟩|^k`
/// between two graphs on the same number of vertices.
///
/// Pairs with vanishing overlap or vanishing numerator contribute nothing.
/// A vanishing denominator with a nonzero numerator and overlap is an error.
pub fn wicker_distance(g1: &Graph, g2: &Graph, k: u32) -> Result<f64> {
    if g1.n() != g2.n() {
        return Err(Error::DimensionMismatch(format!(
            "graphs on {} and {} vertices",
            g1.n(),
            g2.n()
        )));
    }
    let (lam, u) = sym_eigen_sorted(&g1.to_dense());
    let (mu, v) = sym_eigen_sorted(&g2.to_dense());
    let overlaps = u.transpose() * &v;
    let mut total = 0.0;
    for (i, &l) in lam.iter().enumerate() {
        for (j, &m) in mu.iter().enumerate() {
            let overlap = overlaps[(i, j)].abs();
            let num = (l - m).powi(2);
            if overlap <= ZERO_TOL || num <= ZERO_TOL {
                continue;
            }
            let den = l + m;
            if den.abs() <= ZERO_TOL {
                return Err(Error::DegenerateDenominator {
                    lambda: l,
                    mu: m,
                    overlap,
                });
            }
            total += num / den * overlap.powi(k as i32);
        }
    }
    Ok(total)
}
