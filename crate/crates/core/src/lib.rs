//! Graph comparison through moments of adjacency spectral distributions.
//!
//! A graph is summarized by the moments `m_k = ⟨e, A^k e⟩` of its adjacency
//! matrix in the uniform vector state `e = 1/√n`. The Hankel matrix of those
//! moments is positive semidefinite, and the distance between two graphs is a
//! matrix distance between their Hankel matrices. Moments cost `K` sparse
//! matrix-vector products, so the whole pipeline is linear in the edge count.

pub mod baselines;
pub mod distance_matrix;
pub mod error;
pub mod graph;
pub mod hankel;
pub mod learn;
pub mod linalg;
pub mod metrics;
pub mod moments;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Graph, Permutation};
