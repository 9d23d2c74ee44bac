use std::collections::{HashSet, VecDeque};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

/// Ring lattice with per-edge endpoint rewiring.
///
/// Every vertex starts linked to its `ne / nv` nearest neighbors on each side.
/// Each lattice edge `(u, u + j)` is then visited once (offset-major order) and
/// with probability `rho` its far endpoint is moved to a uniformly random
/// vertex, redrawing on self-loops and duplicates. The edge count is exactly
/// `ne` for every `rho`, and `rho = 0` returns the regular lattice.
pub fn generate_rewired(nv: usize, ne: usize, rho: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!(
            "rewiring probability {rho} outside [0, 1]"
        )));
    }
    if nv == 0 || ne % nv != 0 || ne == 0 {
        return Err(Error::InvalidArgument(format!(
            "ring lattice needs ne to be a positive multiple of nv (nv={nv}, ne={ne})"
        )));
    }
    let half = ne / nv;
    if 2 * half >= nv {
        return Err(Error::InvalidArgument(format!(
            "ring lattice with {half} neighbors per side needs more than {} vertices",
            2 * half
        )));
    }

    let mut adj: Vec<HashSet<usize>> = vec![HashSet::with_capacity(2 * half); nv];
    for u in 0..nv {
        for j in 1..=half {
            let v = (u + j) % nv;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if rho > 0.0 {
        for j in 1..=half {
            for u in 0..nv {
                if !rng.random_bool(rho) || adj[u].len() >= nv - 1 {
                    continue;
                }
                let v = (u + j) % nv;
                let w = loop {
                    let w = rng.random_range(0..nv);
                    if w != u && !adj[u].contains(&w) {
                        break w;
                    }
                };
                adj[u].remove(&v);
                adj[v].remove(&u);
                adj[u].insert(w);
                adj[w].insert(u);
            }
        }
    }

    let lists = adj.into_iter().map(|s| s.into_iter().collect()).collect();
    Ok(Graph::from_adjacency(lists))
}

/// Breadth-first snowball sample of `target_n` vertices.
///
/// The walk starts at a uniformly random vertex and visits neighbors in id
/// order. If the component runs out first, it restarts from a uniformly random
/// unvisited vertex. Returns the induced subgraph relabeled in visit order.
pub fn sample_subgraph(g: &Graph, target_n: usize, seed: u64) -> Result<Graph> {
    if target_n == 0 || target_n > g.n() {
        return Err(Error::InvalidArgument(format!(
            "sample size {target_n} not in 1..={}",
            g.n()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut visited = vec![false; g.n()];
    let mut order = Vec::with_capacity(target_n);
    let mut queue = VecDeque::new();

    while order.len() < target_n {
        if queue.is_empty() {
            let unvisited: Vec<usize> = (0..g.n()).filter(|&v| !visited[v]).collect();
            let s = unvisited[rng.random_range(0..unvisited.len())];
            visited[s] = true;
            order.push(s);
            queue.push_back(s);
            continue;
        }
        let u = queue.pop_front().unwrap();
        for v in g.neighbors(u).iter().map(|&v| v as usize) {
            if order.len() == target_n {
                break;
            }
            if !visited[v] {
                visited[v] = true;
                order.push(v);
                queue.push_back(v);
            }
        }
    }
    g.induced_subgraph(&order)
}
