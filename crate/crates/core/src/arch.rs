// SPDX-License-Identifier: Apache-2.0

//! Device connectivity graphs and their hop-count distance matrices.

use std::collections::VecDeque;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TOKYO20: &str = include_str!("../data/tokyo20.edges");
const ROCHESTER53: &str = include_str!("../data/rochester53.edges");
const SYCAMORE54: &str = include_str!("../data/sycamore54.edges");

const BUILTIN_NAMES: &str = "ourense, tokyo20, rochester53, sycamore54, sycamore53, line-<k>, grid-<R>x<C>";

/// Undirected, connected coupling graph with all-pairs shortest-path lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    dist: Vec<u32>,
}

/// On-disk JSON form: `{ "n": 5, "edges": [[0, 1], ...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl ArchGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut canon = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::MalformedGraph(format!(
                    "edge ({a}, {b}) has an endpoint outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::MalformedGraph(format!("self-loop on vertex {a}")));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        canon.dedup();

        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &canon {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }

        let mut dist = vec![u32::MAX; n * n];
        for src in 0..n {
            bfs_into(&adjacency, src, &mut dist[src * n..(src + 1) * n]);
        }
        if dist.contains(&u32::MAX) {
            return Err(Error::Disconnected {
                components: components(&adjacency),
            });
        }

        Ok(ArchGraph {
            n,
            edges: canon,
            adjacency,
            dist,
        })
    }

    /// A named device or synthetic topology.
    pub fn builtin(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownArchitecture {
            name: name.to_string(),
            valid: BUILTIN_NAMES.to_string(),
        };
        match name {
            "ourense" => ArchGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (3, 4)]),
            "tokyo20" => parse_edge_file(TOKYO20).and_then(|f| f.build()),
            "rochester53" => parse_edge_file(ROCHESTER53).and_then(|f| f.build()),
            "sycamore54" => parse_edge_file(SYCAMORE54).and_then(|f| f.build()),
            "sycamore53" => {
                let file = parse_edge_file(SYCAMORE54)?;
                let bad = file
                    .bad
                    .ok_or_else(|| Error::MalformedGraph("sycamore data lacks `bad` vertex".into()))?;
                file.without_vertex(bad).build()
            }
            _ => {
                if let Some(k) = name.strip_prefix("line-") {
                    let k: usize = k.parse().map_err(|_| unknown())?;
                    if k == 0 {
                        return Err(unknown());
                    }
                    let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
                    ArchGraph::from_edges(k, &edges)
                } else if let Some(dims) = name.strip_prefix("grid-") {
                    let (r, c) = dims.split_once('x').ok_or_else(unknown)?;
                    let r: usize = r.parse().map_err(|_| unknown())?;
                    let c: usize = c.parse().map_err(|_| unknown())?;
                    if r == 0 || c == 0 {
                        return Err(unknown());
                    }
                    ArchGraph::from_edges(r * c, &grid_edges(r, c))
                } else {
                    Err(unknown())
                }
            }
        }
    }

    /// Builtin name, or else a path to a JSON graph file.
    pub fn load(name_or_path: &str) -> Result<Self> {
        match ArchGraph::builtin(name_or_path) {
            Err(Error::UnknownArchitecture { .. }) if Path::new(name_or_path).exists() => {
                ArchGraph::from_json(&std::fs::read_to_string(name_or_path)?)
            }
            other => other,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        let edges: Vec<_> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        ArchGraph::from_edges(file.n, &edges)
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string(&file).expect("graph serializes")
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> u32 {
        self.dist[a * self.n + b]
    }

    #[inline]
    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.dist(a, b) == 1
    }

    /// One shortest path from `a` to `b`, both endpoints included. Among equal
    /// choices the lowest-indexed neighbour is taken.
    pub fn shortest_path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            cur = *self.adjacency[cur]
                .iter()
                .find(|&&nb| self.dist(nb, b) + 1 == self.dist(cur, b))
                .expect("connected graph has a next hop");
            path.push(cur);
        }
        path
    }
}

fn bfs_into(adjacency: &[Vec<usize>], src: usize, row: &mut [u32]) {
    row[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if row[w] == u32::MAX {
                row[w] = row[v] + 1;
                queue.push_back(w);
            }
        }
    }
}

fn components(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adjacency.len();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; n];
    for v in 0..n {
        if seen[v] {
            continue;
        }
        let mut row = vec![u32::MAX; n];
        bfs_into(adjacency, v, &mut row);
        let comp: Vec<usize> = (0..n).filter(|&w| row[w] != u32::MAX).collect();
        for &w in &comp {
            seen[w] = true;
        }
        out.push(comp);
    }
    out
}

fn grid_edges(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    edges
}

struct EdgeFile {
    n: usize,
    bad: Option<usize>,
    edges: Vec<(usize, usize)>,
}

impl EdgeFile {
    fn build(&self) -> Result<ArchGraph> {
        ArchGraph::from_edges(self.n, &self.edges)
    }

    /// Drops vertex `v` with its incident edges and closes the gap in numbering.
    fn without_vertex(&self, v: usize) -> EdgeFile {
        let shift = |x: usize| if x > v { x - 1 } else { x };
        EdgeFile {
            n: self.n - 1,
            bad: None,
            edges: self
                .edges
                .iter()
                .filter(|&&(a, b)| a != v && b != v)
                .map(|&(a, b)| (shift(a), shift(b)))
                .collect(),
        }
    }
}

/// `vertices N`, optional `bad V`, then one `a b` pair per line. `#` starts a comment.
fn parse_edge_file(text: &str) -> Result<EdgeFile> {
    let mut n = None;
    let mut bad = None;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::MalformedGraph(format!("line {}: bad number `{s}`", lineno + 1)))
        };
        match fields.as_slice() {
            ["vertices", k] => n = Some(num(k)?),
            ["bad", k] => bad = Some(num(k)?),
            [a, b] => edges.push((num(a)?, num(b)?)),
            _ => {
                return Err(Error::MalformedGraph(format!(
                    "line {}: unexpected `{line}`",
                    lineno + 1
                )))
            }
        }
    }
    let n = n.ok_or_else(|| Error::MalformedGraph("missing `vertices` line".into()))?;
    Ok(EdgeFile { n, bad, edges })
}
