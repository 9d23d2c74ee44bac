//! Named graph families and the catalog of the eleven graphs on four vertices.

use super::Graph;
use crate::error::{Error, Result};

/// The eleven non-isomorphic simple graphs on four vertices, in the order
/// used by the reference distance table.
pub const FOUR_VERTEX_CATALOG: [&str; 11] = [
    "4K1",
    "K4",
    "co-diamond",
    "diamond",
    "co-paw",
    "paw",
    "2K2",
    "C4",
    "claw",
    "co-claw",
    "P4",
];

fn complete(n: usize) -> Graph {
    let adj = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
    Graph::from_adjacency(adj)
}

fn star(n: usize) -> Graph {
    // center is vertex 0
    let edges = (1..n).map(|v| (0, v));
    Graph::from_edges(n, edges).expect("star edges are valid")
}

fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "cycle needs at least 3 vertices, got {n}"
        )));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
}

fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
    Graph::from_edges(a + b, edges).expect("bipartite edges are valid")
}

fn copies(count: usize, g: &Graph) -> Graph {
    (1..count).fold(if count == 0 { Graph::empty(0) } else { g.clone() }, |acc, _| {
        acc.union(g)
    })
}

fn four_vertex(name: &str) -> Option<Graph> {
    let g = |edges: &[(usize, usize)]| Graph::from_edges(4, edges.iter().copied()).unwrap();
    let diamond = || g(&[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
    let paw = || g(&[(0, 1), (0, 2), (1, 2), (2, 3)]);
    let claw = || star(4);
    Some(match name {
        "4K1" => Graph::empty(4),
        "K4" => complete(4),
        "diamond" => diamond(),
        "co-diamond" => diamond().complement(),
        "paw" => paw(),
        "co-paw" => paw().complement(),
        "C4" => cycle(4).unwrap(),
        "2K2" => cycle(4).unwrap().complement(),
        "claw" => claw(),
        "co-claw" => claw().complement(),
        "P4" => path(4),
        _ => return None,
    })
}

fn one_param(name: &str, params: &[usize]) -> Result<usize> {
    match params {
        [n] => Ok(*n),
        _ => Err(Error::InvalidArgument(format!(
            "`{name}` takes exactly one parameter, got {}",
            params.len()
        ))),
    }
}

/// Looks up a graph by family name and integer parameters.
///
/// Families: `K n` (complete), `S n` (star on n vertices), `C n` (cycle),
/// `P n` (path on n vertices), `E n` (n isolated vertices), `Kmn m n`
/// (complete bipartite). The four-vertex catalog names take no parameters.
pub fn named_graph(name: &str, params: &[usize]) -> Result<Graph> {
    if let Some(g) = four_vertex(name) {
        if !params.is_empty() {
            return Err(Error::InvalidArgument(format!("`{name}` takes no parameters")));
        }
        return Ok(g);
    }
    match name {
        "K" => Ok(complete(one_param(name, params)?)),
        "S" => {
            let n = one_param(name, params)?;
            if n == 0 {
                return Err(Error::InvalidArgument("star needs at least one vertex".into()));
            }
            Ok(star(n))
        }
        "C" => cycle(one_param(name, params)?),
        "P" => Ok(path(one_param(name, params)?)),
        "E" => Ok(Graph::empty(one_param(name, params)?)),
        "Kmn" => match params {
            [a, b] => Ok(complete_bipartite(*a, *b)),
            _ => Err(Error::InvalidArgument("`Kmn` takes two parameters".into())),
        },
        _ => Err(Error::UnknownGraph(name.to_string())),
    }
}

/// Parses a compact graph name such as `K4`, `S5`, `C10`, `K2,3`, `3K2`,
/// `co-paw`, or a disjoint union joined by `u`, e.g. `C4uK1`.
pub fn parse_named(spec: &str) -> Result<Graph> {
    let spec = spec.trim();
    let parts: Vec<&str> = spec.split('u').collect();
    if parts.len() > 1 {
        let gs = parts
            .iter()
            .map(|p| parse_single(p).ok_or_else(|| Error::UnknownGraph(spec.to_string())))
            .collect::<Result<Vec<_>>>()?;
        return super::disjoint_union(&gs);
    }
    parse_single(spec).ok_or_else(|| Error::UnknownGraph(spec.to_string()))
}

fn parse_single(s: &str) -> Option<Graph> {
    if let Some(g) = four_vertex(s) {
        return Some(g);
    }
    let digits_end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    let (count, rest) = s.split_at(digits_end);
    if !count.is_empty() {
        // nG: disjoint copies
        let count: usize = count.parse().ok()?;
        let inner = parse_single(rest)?;
        return Some(copies(count, &inner));
    }
    let mut chars = rest.chars();
    let family = chars.next()?;
    let tail = chars
        .as_str()
        .trim_start_matches('_')
        .trim_matches(|c| c == '{' || c == '}');
    if family == 'K' {
        if let Some((a, b)) = tail.split_once(',') {
            return Some(complete_bipartite(a.trim().parse().ok()?, b.trim().parse().ok()?));
        }
    }
    let n: usize = tail.parse().ok()?;
    match family {
        'K' => named_graph("K", &[n]).ok(),
        'S' => named_graph("S", &[n]).ok(),
        'C' => named_graph("C", &[n]).ok(),
        'P' => named_graph("P", &[n]).ok(),
        'E' => named_graph("E", &[n]).ok(),
        _ => None,
    }
}
