#![allow(dead_code)]

use std::collections::HashSet;

use momentdist::Graph;
use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Erdős–Rényi graph with edge probability `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, p, seed)| random_graph(n, p, seed))
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Adjacency as one bitmask per vertex (n ≤ 8).
type Masks = [u8; 8];

fn refine(n: usize, adj: &Masks) -> Vec<usize> {
    let mut color: Vec<usize> = (0..n).map(|v| adj[v].count_ones() as usize).collect();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n).filter(|&u| adj[v] >> u & 1 == 1).map(|u| color[u]).collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
        let classes = |c: &[usize]| c.iter().collect::<HashSet<_>>().len();
        if classes(&next) == classes(&color) {
            return next;
        }
        color = next;
    }
}

fn encode(n: usize, adj: &Masks, order: &[usize]) -> u64 {
    let mut code = 0u64;
    for j in 0..n {
        for i in 0..j {
            code = code << 1 | (adj[order[i]] >> order[j] & 1) as u64;
        }
    }
    code
}

/// Isomorphism-invariant code: the largest encoding over all vertex orders
/// that list refined color classes in order.
fn canonical(n: usize, adj: &Masks) -> u64 {
    let color = refine(n, adj);
    let mut slots: Vec<usize> = color.clone();
    slots.sort_unstable();
    let mut best = 0u64;
    let mut order = Vec::with_capacity(n);
    let mut used = [false; 8];
    fn go(
        n: usize,
        adj: &Masks,
        color: &[usize],
        slots: &[usize],
        order: &mut Vec<usize>,
        used: &mut [bool; 8],
        best: &mut u64,
    ) {
        let p = order.len();
        if p == n {
            *best = (*best).max(encode(n, adj, order));
            return;
        }
        for v in 0..n {
            if !used[v] && color[v] == slots[p] {
                used[v] = true;
                order.push(v);
                go(n, adj, color, slots, order, used, best);
                order.pop();
                used[v] = false;
            }
        }
    }
    go(n, adj, &color, &slots, &mut order, &mut used, &mut best);
    best
}

fn to_graph(n: usize, adj: &Masks) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).filter(move |&v| adj[u] >> v & 1 == 1).map(move |v| (u, v)));
    Graph::from_edges(n, edges).unwrap()
}

/// One representative of every isomorphism class of graphs on `n ≤ 8`
/// vertices, for each `n` in `1..=max_n`, built by adding a vertex to every
/// class on one fewer vertex in every possible way.
pub fn all_graphs(max_n: usize) -> Vec<Vec<Graph>> {
    assert!((1..=8).contains(&max_n));
    let mut levels: Vec<Vec<Masks>> = vec![vec![[0u8; 8]]];
    for n in 2..=max_n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for base in &levels[n - 2] {
            for nb in 0u16..(1 << (n - 1)) {
                let mut adj = *base;
                for u in 0..n - 1 {
                    if nb >> u & 1 == 1 {
                        adj[u] |= 1 << (n - 1);
                        adj[n - 1] |= 1 << u;
                    }
                }
                if seen.insert(canonical(n, &adj)) {
                    next.push(adj);
                }
            }
        }
        levels.push(next);
    }
    levels
        .iter()
        .enumerate()
        .map(|(i, level)| level.iter().map(|adj| to_graph(i + 1, adj)).collect())
        .collect()
}
