//! Weighted undirected graphs, the Newman-Watts-Strogatz ensemble, and the
//! edge-list file format.
//!
//! Edge-list format: an optional run of `#` comment lines, a header `n m`, then
//! `m` lines `u v w` with 0-based vertex indices and a positive weight.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Maximum rejection draws per shortcut before the shortcut is skipped.
pub const SHORTCUT_RETRIES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// An undirected graph with positive edge weights; every edge has `u < v`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Validates and normalizes the edge list (endpoints are reordered so that
    /// `u < v`; edge order is preserved).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (a, b, w) in edges {
            let (u, v) = (a.min(b), a.max(b));
            if v >= n {
                return Err(Error::input(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::input(format!("self loop at vertex {u}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::input(format!(
                    "edge ({u}, {v}) has non-positive weight {w}"
                )));
            }
            if !seen.insert((u, v)) {
                return Err(Error::input(format!("duplicate edge ({u}, {v})")));
            }
            out.push(Edge { u, v, w });
        }
        Ok(Self { n, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Adjacency lists `(neighbor, weight)`, neighbors in edge order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        adj
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (u, v) = (a.min(b), a.max(b));
        self.edges.iter().any(|e| e.u == u && e.v == v)
    }

    pub fn to_edgelist(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n, self.edges.len());
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.u, e.v, e.w);
        }
        s
    }

    pub fn parse_edgelist(text: &str, path: &Path) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(path, 1, "missing `n m` header"))?;
        let mut hf = header.split_whitespace();
        let n: usize = field(hf.next(), path, hline, "vertex count")?;
        let m: usize = field(hf.next(), path, hline, "edge count")?;
        let mut edges = Vec::with_capacity(m);
        let mut seen = HashSet::new();
        for (lineno, line) in lines {
            let mut f = line.split_whitespace();
            let u: usize = field(f.next(), path, lineno, "vertex")?;
            let v: usize = field(f.next(), path, lineno, "vertex")?;
            let w: f64 = field(f.next(), path, lineno, "weight")?;
            if u >= n || v >= n {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("vertex out of range for n = {n}"),
                ));
            }
            if u == v {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("self loop at vertex {u}"),
                ));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("weight {w} must be positive"),
                ));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::parse(path, lineno, "duplicate edge"));
            }
            edges.push((u, v, w));
        }
        if edges.len() != m {
            return Err(Error::parse(
                path,
                hline,
                format!("header declares {m} edges, found {}", edges.len()),
            ));
        }
        Self::new(n, edges)
    }

    pub fn read_edgelist(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_edgelist(&text, path)
    }

    pub fn write_edgelist(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_edgelist())?;
        Ok(())
    }
}

fn field<T: std::str::FromStr>(f: Option<&str>, path: &Path, line: usize, what: &str) -> Result<T> {
    let f = f.ok_or_else(|| Error::parse(path, line, format!("missing {what}")))?;
    f.parse()
        .map_err(|_| Error::parse(path, line, format!("bad {what} `{f}`")))
}

/// Parameters of the Newman-Watts-Strogatz ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NwsParams {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub weighted: bool,
}

/// Generates a Newman-Watts-Strogatz small-world graph.
///
/// The procedure, in draw order from a [`SplitMix64`] seeded with `seed`:
///
/// 1. Ring lattice: for `u` in `0..n`, for `d` in `1..=k/2`, the edge
///    `(u, (u + d) mod n)`.
/// 2. For each lattice edge in that order, with source `u`: if
///    `next_f64() < p`, draw `r = below(n)` until `r != u` and `r` is not
///    already adjacent to `u` (at most 100 draws, otherwise skip), and add
///    `(u, r)`.
/// 3. If weighted, each edge in final order gets `w = 1 - next_f64()`, which
///    lies in `(0, 1]`; otherwise `w = 1`.
pub fn nws_generate(params: NwsParams, seed: u64) -> Result<WeightedGraph> {
    let NwsParams { n, k, p, weighted } = params;
    if k == 0 || k % 2 != 0 {
        return Err(Error::input(format!("k = {k} must be positive and even")));
    }
    if n <= k {
        return Err(Error::input(format!("n = {n} must exceed k = {k}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("p = {p} must lie in [0, 1]")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut adjacent = vec![HashSet::new(); n];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut add = |adjacent: &mut Vec<HashSet<usize>>, a: usize, b: usize| {
        adjacent[a].insert(b);
        adjacent[b].insert(a);
        pairs.push((a, b));
    };
    for u in 0..n {
        for d in 1..=k / 2 {
            add(&mut adjacent, u, (u + d) % n);
        }
    }
    let lattice_sources: Vec<usize> = (0..n)
        .flat_map(|u| std::iter::repeat(u).take(k / 2))
        .collect();
    for u in lattice_sources {
        if !rng.bernoulli(p) {
            continue;
        }
        for _ in 0..SHORTCUT_RETRIES {
            let r = rng.below(n);
            if r != u && !adjacent[u].contains(&r) {
                add(&mut adjacent, u, r);
                break;
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> = pairs
        .into_iter()
        .map(|(a, b)| {
            let w = if weighted { 1.0 - rng.next_f64() } else { 1.0 };
            (a, b, w)
        })
        .collect();
    WeightedGraph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, k: usize, p: f64, weighted: bool) -> NwsParams {
        NwsParams { n, k, p, weighted }
    }

    #[test]
    fn lattice_only() {
        let g = nws_generate(params(6, 4, 0.0, false), 3).unwrap();
        assert_eq!(g.edges().len(), 12);
        assert!(g.edges().iter().all(|e| e.w == 1.0));
    }

    #[test]
    fn full_shortcut_probability() {
        for seed in 0..20 {
            let g = nws_generate(params(6, 4, 1.0, true), seed).unwrap();
            assert!((12..=24).contains(&g.edges().len()));
        }
    }

    #[test]
    fn contains_ring_lattice_and_valid_weights() {
        for seed in 0..20 {
            let g = nws_generate(params(30, 4, 0.5, true), seed).unwrap();
            for u in 0..30 {
                for d in 1..=2 {
                    assert!(g.has_edge(u, (u + d) % 30));
                }
            }
            assert!(g.edges().iter().all(|e| e.w > 0.0 && e.w <= 1.0));
            assert!(g.edges().len() >= 60);
        }
    }

    #[test]
    fn deterministic() {
        let a = nws_generate(params(20, 4, 0.5, true), 7).unwrap();
        let b = nws_generate(params(20, 4, 0.5, true), 7).unwrap();
        let c = nws_generate(params(20, 4, 0.5, true), 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(nws_generate(params(4, 4, 0.5, false), 0).is_err());
        assert!(nws_generate(params(10, 3, 0.5, false), 0).is_err());
    }

    #[test]
    fn edgelist_round_trip() {
        let g = nws_generate(params(6, 4, 0.0, false), 1).unwrap();
        let back = WeightedGraph::parse_edgelist(&g.to_edgelist(), Path::new("g")).unwrap();
        assert_eq!(back, g);
        let w = nws_generate(params(25, 4, 0.5, true), 11).unwrap();
        let back = WeightedGraph::parse_edgelist(&w.to_edgelist(), Path::new("g")).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn edgelist_errors() {
        let p = Path::new("bad.txt");
        let self_loop = WeightedGraph::parse_edgelist("6 2\n0 1 0.5\n5 5 0.3\n", p).unwrap_err();
        assert!(matches!(self_loop, Error::Parse { line: 3, .. }));
        let zero = WeightedGraph::parse_edgelist("# c\n6 1\n0 1 0\n", p).unwrap_err();
        assert!(matches!(zero, Error::Parse { line: 3, .. }));
        let range = WeightedGraph::parse_edgelist("3 1\n0 3 0.5\n", p).unwrap_err();
        assert!(matches!(range, Error::Parse { line: 2, .. }));
        let count = WeightedGraph::parse_edgelist("3 2\n0 1 0.5\n", p).unwrap_err();
        assert!(matches!(count, Error::Parse { line: 1, .. }));
    }
}
