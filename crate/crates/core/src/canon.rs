//! Exact canonical labeling by colour refinement and individualization.
//!
//! The search tree is the usual one: refine the ordered partition to an
//! equitable one, individualize each vertex of the first non-singleton cell
//! in turn, recurse. Leaves are discrete partitions; the canonical graph is
//! the lexicographically smallest relabeled adjacency among explored leaves.
//! Automorphisms found on the way prune children in the same orbit of the
//! pointwise stabilizer of the current path, and a leaf equivalent to the
//! first leaf sends the search back to the node where the two paths split.
//! The generators collected this way generate the full automorphism group.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{bits, Graph};
use crate::graph6::write_graph6;

/// Isomorphism-class key: the graph6 string of the canonically relabeled
/// graph. Equal keys iff isomorphic graphs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Result of a canonical labeling run.
#[derive(Clone, Debug)]
pub struct Labeling {
    /// `order[i]` is the vertex that receives canonical label `i`.
    pub order: Vec<usize>,
    /// Automorphism generators as vertex maps (`gen[v]` is the image of `v`).
    pub generators: Vec<Vec<usize>>,
    orbit: Vec<usize>,
    canonical_rows: Vec<u64>,
}

impl Labeling {
    /// Canonical label of vertex `v`.
    pub fn position(&self, v: usize) -> usize {
        self.order.iter().position(|&w| w == v).expect("vertex in labeling")
    }

    /// Smallest vertex of the automorphism orbit containing `v`.
    pub fn orbit_of(&self, v: usize) -> usize {
        self.orbit[v]
    }

    pub fn orbits(&self) -> &[usize] {
        &self.orbit
    }

    pub fn same_orbit(&self, a: usize, b: usize) -> bool {
        self.orbit[a] == self.orbit[b]
    }

    pub fn canonical_graph(&self) -> Graph {
        Graph::from_rows(self.canonical_rows.clone()).expect("canonical rows are a valid graph")
    }

    pub fn form(&self) -> CanonicalForm {
        CanonicalForm(write_graph6(&self.canonical_graph()))
    }

    pub fn is_asymmetric(&self) -> bool {
        self.generators.is_empty()
    }
}

pub fn canonical_labeling(g: &Graph) -> Labeling {
    let n = g.order();
    let mut search = Search {
        g,
        first: None,
        best: None,
        generators: Vec::new(),
    };
    if n > 0 {
        let mut cells = vec![g.all()];
        refine(g, &mut cells);
        let mut path = Vec::new();
        search.descend(cells, &mut path);
    }
    let orbit = orbit_reps(n, &search.generators);
    let (order, canonical_rows) = match search.best {
        Some(leaf) => (leaf.order, leaf.rows),
        None => (Vec::new(), Vec::new()),
    };
    Labeling {
        order,
        generators: search.generators,
        orbit,
        canonical_rows,
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    canonical_labeling(g).form()
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order()
        && a.size() == b.size()
        && canonical_labeling(a).canonical_rows == canonical_labeling(b).canonical_rows
}

/// Orbit representative (smallest member) of every vertex under `Aut(g)`.
pub fn automorphism_orbits(g: &Graph) -> Vec<usize> {
    canonical_labeling(g).orbit
}

struct Leaf {
    order: Vec<usize>,
    rows: Vec<u64>,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Returns `Some(level)` when the caller chain should unwind to the node
    /// at depth `level`.
    fn descend(&mut self, cells: Vec<u64>, path: &mut Vec<usize>) -> Option<usize> {
        let Some(target) = cells.iter().position(|c| c & (c - 1) != 0) else {
            return self.leaf(&cells, path);
        };
        let cell = cells[target];
        let mut explored: Vec<usize> = Vec::new();
        for v in bits(cell) {
            if !explored.is_empty() && self.pruned(v, &explored, path) {
                continue;
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1u64 << v);
            child.push(cell & !(1u64 << v));
            child.extend_from_slice(&cells[target + 1..]);
            refine(self.g, &mut child);
            path.push(v);
            let jump = self.descend(child, path);
            path.pop();
            if let Some(level) = jump {
                if level < path.len() {
                    return Some(level);
                }
            }
        }
        None
    }

    /// True if `v` lies in the orbit of an explored sibling under the
    /// automorphisms found so far that fix `path` pointwise.
    fn pruned(&self, v: usize, explored: &[usize], path: &[usize]) -> bool {
        let fixing: Vec<&Vec<usize>> = self
            .generators
            .iter()
            .filter(|gen| path.iter().all(|&p| gen[p] == p))
            .collect();
        if fixing.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.g.order());
        for gen in fixing {
            for (a, &b) in gen.iter().enumerate() {
                uf.union(a, b);
            }
        }
        let root = uf.find(v);
        explored.iter().any(|&w| uf.find(w) == root)
    }

    fn leaf(&mut self, cells: &[u64], path: &[usize]) -> Option<usize> {
        let order: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let rows = relabeled_rows(self.g, &order);
        let Some(first) = &self.first else {
            let leaf = Leaf {
                order,
                rows,
                path: path.to_vec(),
            };
            self.best = Some(Leaf {
                order: leaf.order.clone(),
                rows: leaf.rows.clone(),
                path: leaf.path.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if rows == first.rows {
            let gen = map_between(&first.order, &order);
            let split = first
                .path
                .iter()
                .zip(path)
                .take_while(|(a, b)| a == b)
                .count();
            self.push_generator(gen);
            return Some(split);
        }
        let best = self.best.as_ref().expect("best leaf set with first");
        match rows.cmp(&best.rows) {
            Ordering::Less => {
                self.best = Some(Leaf {
                    order,
                    rows,
                    path: path.to_vec(),
                });
            }
            Ordering::Equal => {
                let gen = map_between(&best.order, &order);
                self.push_generator(gen);
            }
            Ordering::Greater => {}
        }
        None
    }

    fn push_generator(&mut self, gen: Vec<usize>) {
        if gen.iter().enumerate().any(|(a, &b)| a != b) {
            self.generators.push(gen);
        }
    }
}

/// The permutation sending `from[i]` to `to[i]`.
fn map_between(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut gen = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        gen[a] = b;
    }
    gen
}

fn relabeled_rows(g: &Graph, order: &[usize]) -> Vec<u64> {
    let mut pos = vec![0usize; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    order
        .iter()
        .map(|&v| g.neighbors(v).fold(0u64, |acc, w| acc | 1u64 << pos[w]))
        .collect()
}

/// Refines an ordered partition (cells as bitsets) to the coarsest equitable
/// refinement. Split cells are replaced in place by their fragments ordered
/// by increasing neighbour count, so the result depends only on the graph
/// and the input partition, never on vertex names.
pub(crate) fn refine(g: &Graph, cells: &mut Vec<u64>) {
    let mut counts: Vec<(u32, usize)> = Vec::with_capacity(g.order());
    loop {
        let mut changed = false;
        let mut w = 0;
        while w < cells.len() {
            let splitter = cells[w];
            let mut c = 0;
            while c < cells.len() {
                let cell = cells[c];
                if cell & (cell - 1) == 0 {
                    c += 1;
                    continue;
                }
                counts.clear();
                counts.extend(bits(cell).map(|v| ((g.row(v) & splitter).count_ones(), v)));
                let k0 = counts[0].0;
                if counts.iter().all(|&(k, _)| k == k0) {
                    c += 1;
                    continue;
                }
                counts.sort_unstable();
                let mut fragments: Vec<u64> = Vec::new();
                let mut last = None;
                for &(k, v) in &counts {
                    if last != Some(k) {
                        fragments.push(0);
                        last = Some(k);
                    }
                    *fragments.last_mut().expect("fragment") |= 1u64 << v;
                }
                let added = fragments.len();
                cells.splice(c..c + 1, fragments);
                c += added;
                changed = true;
            }
            w += 1;
        }
        if !changed {
            break;
        }
    }
}

fn orbit_reps(n: usize, generators: &[Vec<usize>]) -> Vec<usize> {
    let mut uf = UnionFind::new(n);
    for gen in generators {
        for (a, &b) in gen.iter().enumerate() {
            uf.union(a, b);
        }
    }
    let mut rep = vec![usize::MAX; n];
    let mut out = vec![0; n];
    for (v, slot) in out.iter_mut().enumerate() {
        let r = uf.find(v);
        if rep[r] == usize::MAX {
            rep[r] = v;
        }
        *slot = rep[r];
    }
    out
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Applies an automorphism group (given by generators) to a vertex subset
/// and reports whether `set` is the numerically smallest member of its orbit.
pub(crate) fn is_min_in_orbit(set: u64, generators: &[Vec<usize>]) -> bool {
    if generators.is_empty() {
        return true;
    }
    let image = |s: u64, gen: &[usize]| bits(s).fold(0u64, |acc, v| acc | 1u64 << gen[v]);
    for gen in generators {
        if image(set, gen) < set {
            return false;
        }
    }
    let mut seen = vec![set];
    let mut stack = vec![set];
    while let Some(s) = stack.pop() {
        for gen in generators {
            let t = image(s, gen);
            if t < set {
                return false;
            }
            if !seen.contains(&t) {
                seen.push(t);
                stack.push(t);
            }
        }
    }
    true
}
