//! Simple undirected graphs, trees, and the samplers and spectral tools
//! built on them.

mod forest;
mod resistance;
mod sample;
pub(crate) mod ust;

pub use forest::{forest_partition, ForestFamily};
pub use resistance::{effective_resistance, ResistanceTable};
pub use sample::{prufer_decode, sample_er_graph, sample_random_tree};
pub use ust::uniform_spanning_tree;

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{invalid, Error, Result};

/// Undirected simple graph on vertices `0..n`.
///
/// Edges are stored normalized as `(u, v)` with `u < v` and sorted, so an
/// edge has a stable index into [`Graph::edges`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut norm = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u},{v}) out of range for n={n}"));
            }
            if u == v {
                return invalid(format!("self-loop at vertex {u}"));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return invalid(format!("duplicate edge ({},{})", w[0].0, w[0].1));
        }
        Ok(Self::from_sorted(n, norm))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_sorted(n, edges)
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
    }

    /// Cycle `0-1-...-(n-1)-0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return invalid("cycle needs at least 3 vertices");
        }
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// Star with center 0.
    pub fn star(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (0, v))).expect("star edges are valid")
    }

    /// `rows x cols` grid graph, vertex `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Self {
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
        Self::new(rows * cols, edges).expect("grid edges are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Component label per vertex, labels assigned in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().iter().all(|&c| c == 0)
    }

    pub fn is_acyclic(&self) -> bool {
        let mut uf = UnionFind::new(self.n);
        self.edges.iter().all(|&(u, v)| uf.union(u, v))
    }

    /// All pairs `u < v` that are not edges.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v))
            .collect()
    }

    pub fn complement(&self) -> Graph {
        Self::from_sorted(self.n, self.non_edges())
    }

    /// Subgraph on the same vertex set keeping the given edge indices.
    pub fn edge_subgraph(&self, edge_ids: &[usize]) -> Graph {
        let mut edges: Vec<_> = edge_ids.iter().map(|&i| self.edges[i]).collect();
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted(self.n, edges)
    }

    /// Parses the text format: `n m` on the first content line, then `m`
    /// lines `u v`. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing `n m` header".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            edges.push(parse_pair(line, l)?);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, edges)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Graph> {
        Graph::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let bad = |msg: String| Error::Parse { line, msg };
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| bad("expected two integers".into()))?;
        tok.parse().map_err(|_| bad(format!("not a vertex index: `{tok}`")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(bad("trailing tokens".into()));
    }
    Ok((a, b))
}

/// Spanning tree of its vertex set, rooted at vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    graph: Graph,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
}

impl Tree {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::from_graph(Graph::new(n, edges)?)
    }

    pub fn from_graph(graph: Graph) -> Result<Self> {
        let n = graph.n();
        if n == 0 {
            return invalid("a tree needs at least one vertex");
        }
        if graph.m() != n - 1 {
            return invalid(format!("tree on {n} vertices needs {} edges, got {}", n - 1, graph.m()));
        }
        let mut parent = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        depth[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &v in graph.neighbors(u) {
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        if depth.contains(&usize::MAX) {
            return invalid("graph is not connected");
        }
        Ok(Tree { graph, parent, depth })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        self.graph.edges()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Number of edges on the unique `u`-`v` path.
    pub fn path_length(&self, mut u: usize, mut v: usize) -> usize {
        let mut len = 0;
        while self.depth[u] > self.depth[v] {
            u = self.parent[u].unwrap();
            len += 1;
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v].unwrap();
            len += 1;
        }
        while u != v {
            u = self.parent[u].unwrap();
            v = self.parent[v].unwrap();
            len += 2;
        }
        len
    }
}

impl AsRef<Graph> for Tree {
    fn as_ref(&self) -> &Graph {
        &self.graph
    }
}

pub fn complement(g: &Graph) -> Graph {
    g.complement()
}

pub fn tree_path_length(t: &Tree, u: usize, v: usize) -> usize {
    t.path_length(u, v)
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}
