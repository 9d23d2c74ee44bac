//! Hankel moment matrices `M_d[i][j] = m_{i+j}`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::MomentSequence;

/// Degree used when none is given: a 5×5 matrix from `m_0..m_8`.
pub const DEFAULT_DEGREE: usize = 4;

/// Relative threshold below which a leading determinant counts as zero.
pub const DEFAULT_DET_ZERO_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentMatrix {
    degree: usize,
    entries: DMatrix<f64>,
}

impl MomentMatrix {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Side length `degree + 1`.
    pub fn size(&self) -> usize {
        self.degree + 1
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    /// Smallest eigenvalue; nonnegative up to rounding for genuine moment sequences.
    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries.clone()).eigenvalues.min()
    }

    /// PSD check with tolerance `tol · ‖M‖_F`.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol * self.entries.norm()
    }

    /// The moment sequence `m_0..m_{2d}` this matrix was built from.
    pub fn moments(&self) -> Vec<f64> {
        (0..=2 * self.degree)
            .map(|k| {
                let i = k.min(self.degree);
                self.entries[(i, k - i)]
            })
            .collect()
    }
}

/// Builds the degree-`d` Hankel matrix from `m_0..m_{2d}`.
pub fn build_moment_matrix(ms: &MomentSequence, d: usize) -> Result<MomentMatrix> {
    hankel_from_slice(ms.values(), d)
}

pub fn hankel_from_slice(values: &[f64], d: usize) -> Result<MomentMatrix> {
    if values.len() < 2 * d + 1 {
        return Err(Error::InsufficientMoments {
            needed: 2 * d,
            available: values.len().saturating_sub(1),
        });
    }
    let entries = DMatrix::from_fn(d + 1, d + 1, |i, j| values[i + j]);
    Ok(MomentMatrix { degree: d, entries })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HankelRank {
    /// Number of strictly positive leading determinants before the first zero.
    pub rank: usize,
    /// Leading principal determinants of sizes `1..=max_d + 1`.
    pub determinants: Vec<f64>,
}

/// Leading principal determinants of the degree-`max_d` moment matrix and the
/// count of positive ones before the first numerical zero. For the moments of
/// a discrete measure that count is the number of mass points, capped at
/// `max_d + 1`.
///
/// A determinant of size `j` is zero when `|det| ≤ tol · scale^j` with
/// `scale = max(1, m_2)`.
pub fn hankel_rank(ms: &MomentSequence, max_d: usize, tol: f64) -> Result<HankelRank> {
    let m = build_moment_matrix(ms, max_d)?;
    let scale = ms.values().get(2).copied().unwrap_or(1.0).max(1.0);
    let determinants: Vec<f64> = (1..=max_d + 1)
        .map(|j| m.entries.view((0, 0), (j, j)).determinant())
        .collect();
    let rank = determinants
        .iter()
        .enumerate()
        .take_while(|&(idx, &det)| det > tol * scale.powi(idx as i32 + 1))
        .count();
    Ok(HankelRank { rank, determinants })
}

/// Weighted sum `Σ w_i M_i`, the moment matrix of a disjoint union when each
/// weight is the vertex share of its part.
pub fn mix(parts: &[(MomentMatrix, f64)]) -> Result<MomentMatrix> {
    let (first, _) = parts
        .first()
        .ok_or_else(|| Error::InvalidArgument("mixture of no matrices".into()))?;
    let degree = first.degree;
    let mut total = 0.0;
    let mut entries = DMatrix::zeros(degree + 1, degree + 1);
    for (m, w) in parts {
        if m.degree != degree {
            return Err(Error::DimensionMismatch(format!(
                "mixing degree {} with degree {degree}",
                m.degree
            )));
        }
        if !(*w > 0.0) || !w.is_finite() {
            return Err(Error::InvalidArgument(format!("mixture weight {w} not positive")));
        }
        total += w;
        entries += &m.entries * *w;
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "mixture weights sum to {total}, expected 1"
        )));
    }
    Ok(MomentMatrix { degree, entries })
}
