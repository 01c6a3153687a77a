//! Simple undirected graphs on at most 64 vertices, stored as per-vertex
//! neighbour bitsets.
//!
//! Vertices are the integers `0..n`. Every enumeration target has at most 16
//! vertices; the larger capacity only exists so that extremal family members
//! with many pendant edges (size up to ~45) can be built and measured.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of vertices a [`Graph`] can hold.
pub const MAX_ORDER: usize = 64;

/// An undirected edge in normalized form (`u < v`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Normalizes the endpoint order. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "an edge needs two distinct endpoints");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Graph {
    adj: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<(usize, usize)> = self.edges().map(|e| (e.u, e.v)).collect();
        f.debug_struct("Graph")
            .field("n", &self.order())
            .field("edges", &edges)
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_ORDER {
            return Err(Error::Capacity {
                order: n,
                capacity: MAX_ORDER,
            });
        }
        Ok(Graph { adj: vec![0; n] })
    }

    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(a, b) in edges {
            g.insert_edge(a, b)?;
        }
        Ok(g)
    }

    /// Builds a graph from raw adjacency rows. Rows must be symmetric and
    /// loop-free; only bits below `rows.len()` may be set.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        if n > MAX_ORDER {
            return Err(Error::Capacity {
                order: n,
                capacity: MAX_ORDER,
            });
        }
        for (i, &row) in rows.iter().enumerate() {
            if row >> i & 1 == 1 {
                return Err(Error::SelfLoop(i));
            }
            if n < 64 && row >> n != 0 {
                return Err(Error::VertexOutOfRange {
                    vertex: 63 - row.leading_zeros() as usize,
                    order: n,
                });
            }
            for j in bits(row) {
                if rows[j] >> i & 1 == 0 {
                    return Err(Error::Precondition(format!(
                        "adjacency rows are not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Graph { adj: rows })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("cycle needs at least 3 vertices, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Path on `n` vertices (`n - 1` edges).
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Star on `n` vertices with centre 0.
    pub fn star(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::from_edges(n, &edges)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Neighbour bitset of `v`.
    #[inline]
    pub fn row(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> {
        bits(self.adj[v])
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && v < self.order() && self.adj[u] >> v & 1 == 1
    }

    /// Edges in increasing `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.order()).flat_map(move |u| {
            bits(self.adj[u] & !low_mask(u + 1)).map(move |v| Edge { u, v })
        })
    }

    pub fn edge_list(&self) -> Vec<Edge> {
        self.edges().collect()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.order() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                order: self.order(),
            })
        }
    }

    pub(crate) fn insert_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
        Ok(())
    }

    pub(crate) fn remove_edge(&mut self, a: usize, b: usize) {
        self.adj[a] &= !(1 << b);
        self.adj[b] &= !(1 << a);
    }

    /// Appends an isolated vertex and returns its label.
    pub(crate) fn push_vertex(&mut self) -> Result<usize> {
        if self.order() == MAX_ORDER {
            return Err(Error::Capacity {
                order: MAX_ORDER + 1,
                capacity: MAX_ORDER,
            });
        }
        self.adj.push(0);
        Ok(self.adj.len() - 1)
    }

    /// Returns a copy with one extra edge.
    pub fn with_edge(&self, a: usize, b: usize) -> Result<Graph> {
        let mut g = self.clone();
        g.insert_edge(a, b)?;
        Ok(g)
    }

    /// Returns a copy with `count` new pendant vertices hanging from `at`.
    pub fn with_pendants(&self, at: usize, count: usize) -> Result<Graph> {
        self.check_vertex(at)?;
        let mut g = self.clone();
        for _ in 0..count {
            let leaf = g.push_vertex()?;
            g.insert_edge(at, leaf)?;
        }
        Ok(g)
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.order());
        let mut adj = vec![0u64; self.order()];
        for (v, &row) in self.adj.iter().enumerate() {
            let mut out = 0u64;
            for w in bits(row) {
                out |= 1 << perm[w];
            }
            adj[perm[v]] = out;
        }
        Graph { adj }
    }

    /// Induced subgraph on the vertex set `keep` (a bitset); vertices are
    /// renumbered in increasing order. Returns the graph and the map from new
    /// labels to old labels.
    pub fn induced(&self, keep: u64) -> (Graph, Vec<usize>) {
        let old: Vec<usize> = bits(keep).collect();
        let mut new_of = vec![usize::MAX; self.order()];
        for (i, &v) in old.iter().enumerate() {
            new_of[v] = i;
        }
        let adj = old
            .iter()
            .map(|&v| {
                bits(self.adj[v] & keep).fold(0u64, |acc, w| acc | 1 << new_of[w])
            })
            .collect();
        (Graph { adj }, old)
    }

    /// Bitset of all vertices.
    #[inline]
    pub fn all(&self) -> u64 {
        low_mask(self.order())
    }

    /// Vertices reachable from `source` inside the vertex set `within`.
    pub fn reach(&self, source: usize, within: u64) -> u64 {
        let mut seen = 1u64 << source;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }
}

/// Bitset with the lowest `n` bits set.
#[inline]
pub fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates over the set bits of `word`, lowest first.
#[inline]
pub fn bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            None
        } else {
            let i = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(i)
        }
    })
}

/// All-pairs hop counts. Missing paths are reported as `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u8>,
}

const UNREACHABLE: u8 = u8::MAX;

impl DistanceMatrix {
    pub fn new(g: &Graph) -> Self {
        let n = g.order();
        let mut dist = vec![UNREACHABLE; n * n];
        for s in 0..n {
            bfs_fill(g, s, &mut dist[s * n..(s + 1) * n]);
        }
        DistanceMatrix { n, dist }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        match self.dist[u * self.n + v] {
            UNREACHABLE => None,
            d => Some(d as u32),
        }
    }

    /// Distance between vertices known to be connected. Panics otherwise.
    #[inline]
    pub(crate) fn hops(&self, u: usize, v: usize) -> u8 {
        let d = self.dist[u * self.n + v];
        assert!(d != UNREACHABLE, "vertices {u} and {v} are not connected");
        d
    }

    pub fn row(&self, u: usize) -> Vec<Option<u32>> {
        (0..self.n).map(|v| self.get(u, v)).collect()
    }

    pub fn is_connected(&self) -> bool {
        !self.dist.contains(&UNREACHABLE)
    }
}

fn bfs_fill(g: &Graph, source: usize, out: &mut [u8]) {
    out[source] = 0;
    let mut seen = 1u64 << source;
    let mut frontier = seen;
    let mut depth = 0u8;
    while frontier != 0 {
        depth += 1;
        let mut next = 0u64;
        for v in bits(frontier) {
            next |= g.row(v);
        }
        next &= !seen;
        for v in bits(next) {
            out[v] = depth;
        }
        seen |= next;
        frontier = next;
    }
}

/// Unweighted shortest-path distances from `source`.
pub fn bfs_distances(g: &Graph, source: usize) -> Result<Vec<Option<u32>>> {
    g.check_vertex(source)?;
    let mut row = vec![UNREACHABLE; g.order()];
    bfs_fill(g, source, &mut row);
    Ok(row
        .into_iter()
        .map(|d| (d != UNREACHABLE).then_some(d as u32))
        .collect())
}

/// True iff every vertex is reachable from vertex 0. The empty graph counts
/// as connected.
pub fn is_connected(g: &Graph) -> bool {
    g.order() == 0 || g.reach(0, g.all()) == g.all()
}

/// `m - n + 1` for a connected graph.
pub fn cyclomatic_number(g: &Graph) -> Result<usize> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    Ok((g.size() + 1).saturating_sub(g.order()))
}

/// Identifies vertex `v1` of `g1` with vertex `v2` of `g2`.
///
/// Labels of `g1` are kept; the merged vertex keeps label `v1`; the remaining
/// vertices of `g2` follow in increasing order starting at `|V(g1)|`.
pub fn dot_product(g1: &Graph, v1: usize, g2: &Graph, v2: usize) -> Result<Graph> {
    g1.check_vertex(v1)?;
    g2.check_vertex(v2)?;
    let n = g1.order() + g2.order() - 1;
    let mut g = Graph::empty(n)?;
    g.adj[..g1.order()].copy_from_slice(&g1.adj);
    let map = |w: usize| -> usize {
        match w.cmp(&v2) {
            std::cmp::Ordering::Equal => v1,
            std::cmp::Ordering::Less => g1.order() + w,
            std::cmp::Ordering::Greater => g1.order() + w - 1,
        }
    };
    for e in g2.edges() {
        g.insert_edge(map(e.u), map(e.v))?;
    }
    Ok(g)
}

/// Vertices whose removal disconnects the graph.
pub fn cut_vertices(g: &Graph) -> u64 {
    let all = g.all();
    let mut cuts = 0u64;
    for v in 0..g.order() {
        let rest = all & !(1 << v);
        if rest == 0 {
            continue;
        }
        let start = rest.trailing_zeros() as usize;
        if g.reach(start, rest) != rest {
            cuts |= 1 << v;
        }
    }
    cuts
}

/// Parses the plain edge-list format: one `u v` pair per line, `#` comments
/// and blank lines ignored. The order is one more than the largest label
/// unless `order` is given.
pub fn parse_edge_list(text: &str, order: Option<usize>) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut offset = 0usize;
    for line in text.lines() {
        let body = line.split('#').next().unwrap_or("").trim();
        if !body.is_empty() {
            let mut it = body.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.and_then(|t| t.parse().ok()).ok_or_else(|| Error::Parse {
                    offset,
                    message: format!("expected `u v`, found `{body}`"),
                })
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::Parse {
                    offset,
                    message: format!("trailing tokens in `{body}`"),
                });
            }
            edges.push((u, v));
        }
        offset += line.len() + 1;
    }
    let n = order.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Graph::from_edges(n, &edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    g.edges().map(|e| format!("{} {}\n", e.u, e.v)).collect()
}
