//! Induced 3- and 4-vertex subgraph distributions.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, FOUR_VERTEX_CATALOG};

/// Exact counts of induced 3-vertex subgraphs, ordered
/// `[empty, one edge, wedge, triangle]`.
///
/// Triangles come from neighbor-list intersection; the rest follow from
/// `Σ C(d,2) = wedges + 3·triangles` and
/// `Σ_{uv ∈ E} (n − d_u − d_v + t_uv) = one-edge subsets`.
pub fn graphlet3_counts(g: &Graph) -> Result<[u128; 4]> {
    let n = g.n() as u128;
    if n < 3 {
        return Err(Error::InvalidArgument(format!("3-graphlets need n ≥ 3, got {n}")));
    }
    let triangles = triangle_count(g) as u128;
    let deg: Vec<u128> = g.degrees().into_iter().map(|d| d as u128).collect();
    let pairs: u128 = deg.iter().map(|d| d * d.saturating_sub(1) / 2).sum();
    let sq: u128 = deg.iter().map(|d| d * d).sum();
    let m = g.m() as u128;
    let wedges = pairs - 3 * triangles;
    let one_edge = m * n + 3 * triangles - sq;
    let total = n * (n - 1) * (n - 2) / 6;
    let empty = total - one_edge - wedges - triangles;
    Ok([empty, one_edge, wedges, triangles])
}

pub fn triangle_count(g: &Graph) -> u64 {
    let mut count = 0u64;
    for u in 0..g.n() {
        let nu = g.neighbors(u);
        for &v in nu.iter().filter(|&&v| v as usize > u) {
            // merge-intersect the parts of both lists above v
            let (mut i, mut j) = (0, 0);
            let nv = g.neighbors(v as usize);
            while i < nu.len() && j < nv.len() {
                let (a, b) = (nu[i], nv[j]);
                if a <= v {
                    i += 1;
                } else if b <= v {
                    j += 1;
                } else if a == b {
                    count += 1;
                    i += 1;
                    j += 1;
                } else if a < b {
                    i += 1;
                } else {
                    j += 1;
                }
            }
        }
    }
    count
}

/// Exact 3-graphlet distribution (counts over `C(n, 3)`).
pub fn graphlet3_distribution(g: &Graph) -> Result<Vec<f64>> {
    let counts = graphlet3_counts(g)?;
    let total: u128 = counts.iter().sum();
    Ok(counts.iter().map(|&c| c as f64 / total as f64).collect())
}

/// Index into [`FOUR_VERTEX_CATALOG`] of the graph induced on four vertices.
pub fn classify4(g: &Graph, quad: [usize; 4]) -> usize {
    let mut deg = [0usize; 4];
    let mut edges = 0;
    for a in 0..4 {
        for b in a + 1..4 {
            if g.has_edge(quad[a], quad[b]) {
                deg[a] += 1;
                deg[b] += 1;
                edges += 1;
            }
        }
    }
    deg.sort_unstable();
    match (edges, deg) {
        (0, _) => 0,
        (6, _) => 1,
        (1, _) => 2,
        (5, _) => 3,
        (2, [0, 1, 1, 2]) => 4,
        (4, [1, 2, 2, 3]) => 5,
        (2, _) => 6,
        (4, _) => 7,
        (3, [1, 1, 1, 3]) => 8,
        (3, [0, 2, 2, 2]) => 9,
        (3, _) => 10,
        _ => unreachable!("four vertices have at most six edges"),
    }
}

/// Sampled 4-graphlet distribution over the eleven catalog types, from
/// `samples` uniformly random 4-subsets.
pub fn graphlet4_distribution(g: &Graph, samples: usize, seed: u64) -> Result<Vec<f64>> {
    if g.n() < 4 {
        return Err(Error::InvalidArgument(format!("4-graphlets need n ≥ 4, got {}", g.n())));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "graphlet sampling needs at least one sample".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0usize; FOUR_VERTEX_CATALOG.len()];
    for _ in 0..samples {
        let idx = sample(&mut rng, g.n(), 4);
        let quad = [idx.index(0), idx.index(1), idx.index(2), idx.index(3)];
        counts[classify4(g, quad)] += 1;
    }
    Ok(counts.iter().map(|&c| c as f64 / samples as f64).collect())
}

/// Graphlet kernel value between two distributions.
pub fn graphlet_kernel(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
