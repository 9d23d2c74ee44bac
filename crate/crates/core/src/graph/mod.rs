//! Undirected simple graphs in compressed sparse row form.
//!
//! A [`Graph`] is immutable once built. Every constructor canonicalizes its
//! input: neighbor lists are sorted and deduplicated, self-loops are rejected,
//! and symmetry is enforced. Two graphs compare equal exactly when they have
//! the same labeled edge set.

mod catalog;
mod generate;
mod io;
mod traversal;

pub use catalog::{named_graph, parse_named, FOUR_VERTEX_CATALOG};
pub use generate::{generate_rewired, sample_subgraph};
pub use io::{parse_edge_list, parse_edge_list_str, EdgeListOptions, HeaderMode, Indexing};
pub use traversal::{diameter, walk_count, Diameter};

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rows per rayon task in the sparse matvec. Below this many vertices the
/// product runs on the calling thread.
const PAR_MATVEC_MIN_ROWS: usize = 4096;

/// Largest supported vertex count; neighbor ids are stored as `u32`.
pub const MAX_VERTICES: usize = u32::MAX as usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    offsets: Vec<usize>,
    /// Column indices; `u32` halves the memory streamed by each matvec.
    targets: Vec<u32>,
}

impl Default for Graph {
    fn default() -> Self {
        Graph::empty(0)
    }
}

impl Graph {
    /// Graph with `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Builds a canonical graph from an edge iterator. Duplicate edges (in
    /// either orientation) collapse; self-loops and out-of-range endpoints are
    /// errors.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > MAX_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "{n} vertices exceeds the limit {MAX_VERTICES}"
            )));
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::SelfLoop { line: 0, vertex: u });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Sorts and dedups each list. Callers guarantee symmetry and no loops.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        assert!(adj.len() <= MAX_VERTICES, "too many vertices");
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let total: usize = adj.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            targets.extend(list.iter().map(|&v| v as u32));
            offsets.push(targets.len());
        }
        Graph { offsets, targets }
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sorted neighbor ids of `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.offsets.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    /// Sorted degree sequence, largest first.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Row-pointer and column-index arrays.
    pub fn csr(&self) -> (&[usize], &[u32]) {
        (&self.offsets, &self.targets)
    }

    /// Checks every structural invariant. Constructors already guarantee
    /// these; the check exists for tests and deserialized input.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.offsets[0] != 0 || *self.offsets.last().unwrap() != self.targets.len() {
            return Err(Error::InvalidArgument("corrupt row pointers".into()));
        }
        for u in 0..n {
            let nb = self.neighbors(u);
            if nb.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(format!("neighbors of {u} not strictly sorted")));
            }
            for v in nb.iter().map(|&v| v as usize) {
                if v >= n {
                    return Err(Error::InvalidArgument(format!("neighbor {v} out of range")));
                }
                if v == u {
                    return Err(Error::SelfLoop { line: 0, vertex: u });
                }
                if !self.has_edge(v, u) {
                    return Err(Error::InvalidArgument(format!("edge ({u}, {v}) not symmetric")));
                }
            }
        }
        Ok(())
    }

    /// Dense 0/1 adjacency matrix.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut a = DMatrix::zeros(n, n);
        for (u, v) in self.edges() {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n)
            .map(|u| (0..n).filter(|&v| v != u && !self.has_edge(u, v)).collect())
            .collect();
        Graph::from_adjacency(adj)
    }

    /// Induced subgraph on `vertices`, relabeled so that `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n() || index[v] != usize::MAX {
                return Err(Error::InvalidArgument(format!("vertex {v} out of range or repeated")));
            }
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .iter()
                    .filter_map(|&w| (index[w as usize] != usize::MAX).then_some(index[w as usize]))
                    .collect()
            })
            .collect();
        Ok(Graph::from_adjacency(adj))
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for v in self.neighbors(u).iter().map(|&v| v as usize) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    /// `y = A x`. Each output entry is a sequential sum over the row, so the
    /// result does not depend on the thread count.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n());
        assert_eq!(y.len(), self.n());
        let row = |(u, out): (usize, &mut f64)| {
            *out = self.neighbors(u).iter().map(|&v| x[v as usize]).sum();
        };
        if self.n() >= PAR_MATVEC_MIN_ROWS {
            y.par_iter_mut().enumerate().for_each(row);
        } else {
            y.iter_mut().enumerate().for_each(row);
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n()];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// Disjoint union with `other`; the vertices of `other` are shifted by `self.n()`.
    pub fn union(&self, other: &Graph) -> Graph {
        let shift = self.n();
        let mut offsets = self.offsets.clone();
        assert!(shift + other.n() <= MAX_VERTICES, "too many vertices");
        let mut targets = self.targets.clone();
        targets.extend(other.targets.iter().map(|&v| v + shift as u32));
        let base = self.targets.len();
        offsets.extend(other.offsets[1..].iter().map(|&o| o + base));
        Graph { offsets, targets }
    }
}

/// Disjoint union of a nonempty list of graphs, vertex blocks in list order.
pub fn disjoint_union(gs: &[Graph]) -> Result<Graph> {
    let (first, rest) = gs
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("disjoint union of an empty list".into()))?;
    let total: usize = gs.iter().map(Graph::n).sum();
    if total > MAX_VERTICES {
        return Err(Error::InvalidArgument(format!(
            "{total} vertices exceeds the limit {MAX_VERTICES}"
        )));
    }
    Ok(rest.iter().fold(first.clone(), |acc, g| acc.union(g)))
}

/// A bijection on `0..n`. Vertex `i` of the source graph becomes vertex `map[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &p in &map {
            if p >= map.len() || seen[p] {
                return Err(Error::InvalidArgument(format!("not a permutation of 0..{}", map.len())));
            }
            seen[p] = true;
        }
        Ok(Permutation(map))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn reversal(n: usize) -> Self {
        Permutation((0..n).rev().collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(rng);
        Permutation(map)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Permutation(inv)
    }
}

/// Relabels `g` so that edge `{i, j}` becomes `{p(i), p(j)}`; the adjacency
/// matrix becomes `P A Pᵀ`.
pub fn permute(g: &Graph, p: &Permutation) -> Result<Graph> {
    if p.len() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "permutation of length {} applied to graph with {} vertices",
            p.len(),
            g.n()
        )));
    }
    let mut adj = vec![Vec::new(); g.n()];
    for u in 0..g.n() {
        adj[p.apply(u)] = g.neighbors(u).iter().map(|&v| p.apply(v as usize)).collect();
    }
    Ok(Graph::from_adjacency(adj))
}
