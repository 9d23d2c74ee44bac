use nalgebra::{Cholesky, DMatrix};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Covariance of the normalized walk vectors `x_i = A^i e / ‖A^i e‖`,
/// `i = 1..=k`.
///
/// The vectors form the columns of an `n × k` matrix `X`. With `center`, each
/// row is centered across its `k` entries; the result is `(1/n) X̂ᵀ X̂`.
/// A column with `A^i e = 0` (edgeless graphs) is left at zero.
pub fn cov_descriptor(g: &Graph, k: usize, center: bool) -> Result<DMatrix<f64>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("covariance order must be ≥ 2, got {k}")));
    }
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidArgument("covariance of the empty graph".into()));
    }
    let mut x = DMatrix::zeros(n, k);
    let mut w = vec![1.0; n];
    let mut next = vec![0.0; n];
    for col in 0..k {
        g.mul_vec_into(&w, &mut next);
        std::mem::swap(&mut w, &mut next);
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (r, v) in w.iter().enumerate() {
                x[(r, col)] = v / norm;
            }
            // keep the iterate bounded
            w.iter_mut().for_each(|v| *v /= norm);
        }
    }
    if center {
        for r in 0..n {
            let mean = x.row(r).sum() / k as f64;
            x.row_mut(r).add_scalar_mut(-mean);
        }
    }
    let mut c = x.transpose() * &x / n as f64;
    crate::linalg::symmetrize(&mut c);
    Ok(c)
}

/// Default ridge for [`bhattacharyya_dist`]: `1e-8 · tr((Σ1 + Σ2)/2) / k`,
/// floored at `1e-12` so that two zero matrices stay comparable.
pub fn default_jitter(c1: &DMatrix<f64>, c2: &DMatrix<f64>) -> f64 {
    let k = c1.nrows().max(1) as f64;
    (1e-8 * 0.5 * (c1.trace() + c2.trace()) / k).max(1e-12)
}

fn log_det(m: &DMatrix<f64>) -> Result<f64> {
    if let Some(ch) = Cholesky::new(m.clone()) {
        return Ok(2.0 * ch.l().diagonal().iter().map(|d| d.ln()).sum::<f64>());
    }
    let det = m.determinant();
    if det > 0.0 {
        Ok(det.ln())
    } else {
        Err(Error::Numeric(format!(
            "determinant {det} is not positive; increase jitter"
        )))
    }
}

/// Bhattacharyya distance between zero-mean Gaussians with covariances `c1`, `c2`:
/// `½ ln( det(Σ̄) / sqrt(det Σ1 · det Σ2) )` with `Σ̄ = (Σ1 + Σ2)/2`, each
/// matrix ridged by `jitter · I`.
pub fn bhattacharyya_dist(c1: &DMatrix<f64>, c2: &DMatrix<f64>, jitter: f64) -> Result<f64> {
    if c1.shape() != c2.shape() || !c1.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            c1.shape(),
            c2.shape()
        )));
    }
    let k = c1.nrows();
    let ridge = DMatrix::<f64>::identity(k, k) * jitter;
    let a = c1 + &ridge;
    let b = c2 + &ridge;
    let mid = (&a + &b) * 0.5;
    let d = 0.5 * (log_det(&mid)? - 0.5 * (log_det(&a)? + log_det(&b)?));
    // mid-point log-concavity makes d ≥ 0; clear rounding noise
    Ok(d.max(0.0))
}
