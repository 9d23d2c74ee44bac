//! Edge-list text ingestion.
//!
//! One edge per line as two integer tokens; lines starting with `#` or `%`
//! and blank lines are skipped. Extra tokens after the first two are ignored.
//! An optional first data line `n m` declares the vertex and edge counts.

use std::io::BufRead;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Indexing {
    Zero,
    One,
    /// One-based when the smallest id is 1 and no id 0 occurs.
    #[default]
    Auto,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HeaderMode {
    Present,
    Absent,
    /// The first data line is a header when its second value equals the
    /// number of remaining data lines and its first value bounds every id.
    #[default]
    Auto,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EdgeListOptions {
    pub indexing: Indexing,
    pub header: HeaderMode,
}

impl EdgeListOptions {
    pub fn with_indexing(indexing: Indexing) -> Self {
        EdgeListOptions {
            indexing,
            ..Default::default()
        }
    }
}

pub fn parse_edge_list_str(text: &str, opts: EdgeListOptions) -> Result<Graph> {
    parse_edge_list(text.as_bytes(), opts)
}

pub fn parse_edge_list<R: BufRead>(reader: R, opts: EdgeListOptions) -> Result<Graph> {
    let mut rows: Vec<(usize, usize, usize)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        let mut tokens = t.split_whitespace();
        let mut next = || -> Result<usize> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "expected two vertex ids".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("malformed vertex id `{tok}`"),
            })
        };
        let u = next()?;
        let v = next()?;
        rows.push((lineno, u, v));
    }

    let header = match opts.header {
        HeaderMode::Absent => None,
        HeaderMode::Present => {
            if rows.is_empty() {
                return Err(Error::Parse {
                    line: 0,
                    msg: "missing header line".into(),
                });
            }
            Some(rows.remove(0))
        }
        HeaderMode::Auto => {
            let looks_like_header = rows.first().is_some_and(|&(_, n, m)| {
                let rest = &rows[1..];
                let lo = rest.iter().map(|&(_, u, v)| u.min(v)).min().unwrap_or(0);
                let hi = rest.iter().map(|&(_, u, v)| u.max(v)).max().unwrap_or(0);
                m == rest.len() && (hi < n || (lo >= 1 && hi <= n))
            });
            looks_like_header.then(|| rows.remove(0))
        }
    };

    let min_id = rows.iter().map(|&(_, u, v)| u.min(v)).min();
    let one_based = match opts.indexing {
        Indexing::Zero => false,
        Indexing::One => true,
        Indexing::Auto => min_id == Some(1),
    };

    let mut edges = Vec::with_capacity(rows.len());
    let mut max_id = None;
    for &(line, u, v) in &rows {
        let shift = |x: usize| -> Result<usize> {
            if one_based {
                x.checked_sub(1).ok_or_else(|| Error::Parse {
                    line,
                    msg: "vertex id 0 in one-based input".into(),
                })
            } else {
                Ok(x)
            }
        };
        let (u, v) = (shift(u)?, shift(v)?);
        if u == v {
            return Err(Error::SelfLoop { line, vertex: u });
        }
        max_id = max_id.max(Some(u.max(v)));
        edges.push((u, v));
    }

    let inferred = max_id.map_or(0, |m| m + 1);
    let n = match header {
        Some((line, n, _)) => {
            if n < inferred {
                return Err(Error::Parse {
                    line,
                    msg: format!("header declares {n} vertices but ids reach {}", inferred - 1),
                });
            }
            n
        }
        None => inferred,
    };

    let mut adj = vec![Vec::new(); n];
    for (u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    Ok(Graph::from_adjacency(adj))
}
