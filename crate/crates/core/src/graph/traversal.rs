use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Diameter {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => write!(f, "inf"),
        }
    }
}

/// Eccentricity of `s`, or `None` when some vertex is unreachable.
fn eccentricity(g: &Graph, s: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::from([s]);
    dist[s] = 0;
    let mut reached = 1;
    let mut far = 0;
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u).iter().map(|&v| v as usize) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                far = far.max(dist[v]);
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    (reached == g.n()).then_some(far)
}

/// Largest shortest-path distance over all vertex pairs; `Infinite` when the
/// graph is disconnected. BFS runs from every vertex.
pub fn diameter(g: &Graph) -> Diameter {
    if g.n() == 0 {
        return Diameter::Finite(0);
    }
    (0..g.n())
        .into_par_iter()
        .map(|s| eccentricity(g, s).map_or(Diameter::Infinite, Diameter::Finite))
        .max()
        .unwrap()
}

/// Number of walks of length `k` from `i` to `j`, by exhaustive enumeration.
///
/// Cost grows as `Δ^k`; intended as an independent check on matrix powers.
pub fn walk_count(g: &Graph, i: usize, j: usize, k: usize) -> u64 {
    fn go(g: &Graph, at: usize, target: usize, left: usize) -> u64 {
        if left == 0 {
            return u64::from(at == target);
        }
        g.neighbors(at)
            .iter()
            .map(|&v| go(g, v as usize, target, left - 1))
            .sum()
    }
    go(g, i, j, k)
}
