//! Isomorphism-free generation of connected graphs with a fixed order and
//! size, plus a parallel maximizer of the edge Mostar index over them.
//!
//! Generation is canonical augmentation by vertex addition. A node is a
//! connected graph on `k` vertices; its children add vertex `k` joined to a
//! nonempty subset `S` of the existing vertices, one `S` per orbit of the
//! parent's automorphism group. A child is kept iff the new vertex lies in
//! the automorphism orbit of the child's canonical deletion vertex: among
//! the non-cut vertices with the smallest `(degree, neighbour degree sum)`,
//! the one with the smallest canonical label. Every connected graph has a
//! non-cut vertex, so every class is reached through connected parents only,
//! and the cyclomatic number never decreases along a branch, which bounds
//! the subset sizes by the target `m - n + 1`.
//!
//! The tree is cut at a fixed depth that depends only on `n`; the subtrees
//! below are independent work units and their fold states are merged by
//! sorted canonical form, so results do not depend on the worker count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, canonical_labeling, is_min_in_orbit, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::{bits, cut_vertices, Graph};
use crate::invariants::edge_mostar_connected;

/// Largest order the enumerator accepts.
pub const MAX_ENUM_ORDER: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationTask {
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min_degree: Option<usize>,
}

impl EnumerationTask {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n > MAX_ENUM_ORDER {
            return Err(Error::Capacity {
                order: n,
                capacity: MAX_ENUM_ORDER,
            });
        }
        Ok(EnumerationTask {
            n,
            m,
            min_degree: None,
        })
    }

    /// Connected graphs with `m` edges and cyclomatic number `cycles`.
    pub fn with_cycles(m: usize, cycles: usize) -> Result<Self> {
        if m + 1 < cycles {
            return Err(Error::Domain(format!(
                "no connected graph with {m} edges has cyclomatic number {cycles}"
            )));
        }
        EnumerationTask::new(m + 1 - cycles, m)
    }

    pub fn tricyclic(m: usize) -> Result<Self> {
        Self::with_cycles(m, 3)
    }

    pub fn bicyclic(m: usize) -> Result<Self> {
        Self::with_cycles(m, 2)
    }

    pub fn unicyclic(m: usize) -> Result<Self> {
        Self::with_cycles(m, 1)
    }

    pub fn min_degree(mut self, d: usize) -> Self {
        self.min_degree = Some(d);
        self
    }

    /// Whether any connected simple graph has this order and size.
    pub fn feasible(&self) -> bool {
        match self.n {
            0 | 1 => self.m == 0,
            n => self.m + 1 >= n && self.m <= n * (n - 1) / 2,
        }
    }

    fn accepts_leaf(&self, g: &Graph) -> bool {
        self.min_degree.is_none_or(|d| g.min_degree() >= d)
    }

    /// Depth at which the search tree is cut into parallel work units.
    fn split_order(&self) -> usize {
        if self.n <= 5 {
            self.n
        } else {
            self.n - 3
        }
    }
}

struct Generator<'a> {
    task: &'a EnumerationTask,
}

impl Generator<'_> {
    /// Calls `visit` on every accepted child of `parent`.
    fn expand(&self, parent: &Graph, visit: &mut dyn FnMut(Graph)) {
        let n = self.task.n;
        let m = self.task.m;
        let k = parent.order();
        let e = parent.size();
        let after = n - k - 1;
        if m < e + after + 1 {
            return;
        }
        let s_max = (m - e - after).min(k);
        let future: usize = (k + 1..n).sum();
        let s_min = m.saturating_sub(e + future).max(1);
        if s_min > s_max {
            return;
        }
        let lab = canonical_labeling(parent);
        for s in s_min..=s_max {
            for subset in subsets(k, s) {
                if !is_min_in_orbit(subset, &lab.generators) {
                    continue;
                }
                let mut child = parent.clone();
                let x = child.push_vertex().expect("order within capacity");
                for w in bits(subset) {
                    child.insert_edge(x, w).expect("valid edge");
                }
                if is_canonical_extension(&child, x) {
                    visit(child);
                }
            }
        }
    }

    fn dfs(&self, g: Graph, visit: &mut dyn FnMut(&Graph)) {
        if g.order() == self.task.n {
            debug_assert_eq!(g.size(), self.task.m);
            if self.task.accepts_leaf(&g) {
                visit(&g);
            }
            return;
        }
        let mut kids = Vec::new();
        self.expand(&g, &mut |c| kids.push(c));
        for c in kids {
            self.dfs(c, visit);
        }
    }

    fn roots(&self) -> Vec<Graph> {
        if !self.task.feasible() {
            return Vec::new();
        }
        let root = Graph::empty(self.task.n.min(1)).expect("tiny graph");
        let target = self.task.split_order();
        let mut level = vec![root];
        while level.first().is_some_and(|g| g.order() < target) {
            let mut next = Vec::new();
            for g in &level {
                self.expand(g, &mut |c| next.push(c));
            }
            level = next;
        }
        level
    }
}

/// Vertex-subset bitmasks of size `s` drawn from `0..k`, increasing.
fn subsets(k: usize, s: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << k;
    let mut cur = if s == 0 || s > k { limit } else { (1u64 << s) - 1 };
    std::iter::from_fn(move || {
        if cur >= limit {
            return None;
        }
        let out = cur;
        let low = cur & cur.wrapping_neg();
        let ripple = cur + low;
        cur = (((ripple ^ cur) >> 2) / low) | ripple;
        Some(out)
    })
}

fn deletion_key(g: &Graph, v: usize) -> (usize, usize) {
    (g.degree(v), g.neighbors(v).map(|w| g.degree(w)).sum())
}

/// Canonical-augmentation acceptance test for the child `g` whose newest
/// vertex is `x`.
fn is_canonical_extension(g: &Graph, x: usize) -> bool {
    let candidates = g.all() & !cut_vertices(g);
    let best = bits(candidates)
        .map(|v| deletion_key(g, v))
        .min()
        .expect("a connected graph has a non-cut vertex");
    if deletion_key(g, x) != best {
        return false;
    }
    let tied: Vec<usize> = bits(candidates)
        .filter(|&v| deletion_key(g, v) == best)
        .collect();
    if tied.len() == 1 {
        return true;
    }
    let lab = canonical_labeling(g);
    let mut pos = vec![0usize; g.order()];
    for (i, &v) in lab.order.iter().enumerate() {
        pos[v] = i;
    }
    let chosen = *tied.iter().min_by_key(|&&v| pos[v]).expect("nonempty");
    lab.same_orbit(x, chosen)
}

/// Visits one representative of every isomorphism class of connected graphs
/// matching `task`, sequentially and in a deterministic order.
pub fn enumerate(task: &EnumerationTask, mut visit: impl FnMut(&Graph)) -> Result<()> {
    let gen = Generator { task };
    for root in gen.roots() {
        gen.dfs(root, &mut visit);
    }
    Ok(())
}

pub fn collect(task: &EnumerationTask) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    enumerate(task, |g| out.push(g.clone()))?;
    Ok(out)
}

/// Class count.
pub fn count(task: &EnumerationTask, threads: usize) -> Result<u64> {
    par_fold(task, threads, || 0u64, |acc, _| *acc += 1, |a, b| a + b)
}

/// Parallel fold over the enumeration. `merge` must be associative and
/// insensitive to argument order for the result to be deterministic.
pub fn par_fold<T, I, F, M>(
    task: &EnumerationTask,
    threads: usize,
    init: I,
    fold: F,
    merge: M,
) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &Graph) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let gen = Generator { task };
    let roots = gen.roots();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        roots
            .into_par_iter()
            .map(|root| {
                let mut acc = init();
                gen.dfs(root, &mut |g| fold(&mut acc, g));
                acc
            })
            .reduce(&init, &merge)
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub task: EnumerationTask,
    pub graphs_visited: u64,
    pub max_value: Option<u64>,
    /// Canonical graph6 strings of all maximizers, sorted.
    pub maximizers: Vec<CanonicalForm>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub histogram: Option<BTreeMap<u64, u64>>,
}

#[derive(Clone, Copy, Debug)]
pub struct MaximizeOptions {
    pub threads: usize,
    pub histogram: bool,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        MaximizeOptions {
            threads: default_threads(),
            histogram: false,
        }
    }
}

impl MaximizeOptions {
    pub fn threads(threads: usize) -> Self {
        MaximizeOptions {
            threads,
            histogram: false,
        }
    }
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Default)]
struct MaxState {
    visited: u64,
    best: Option<u64>,
    argmax: Vec<Graph>,
    histogram: BTreeMap<u64, u64>,
}

impl MaxState {
    fn absorb(&mut self, g: &Graph, value: u64, histogram: bool) {
        self.visited += 1;
        if histogram {
            *self.histogram.entry(value).or_default() += 1;
        }
        match self.best {
            Some(b) if value < b => {}
            Some(b) if value == b => self.argmax.push(g.clone()),
            _ => {
                self.best = Some(value);
                self.argmax.clear();
                self.argmax.push(g.clone());
            }
        }
    }

    fn merge(mut self, other: MaxState) -> MaxState {
        self.visited += other.visited;
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        match (self.best, other.best) {
            (_, None) => {}
            (None, Some(_)) => {
                self.best = other.best;
                self.argmax = other.argmax;
            }
            (Some(a), Some(b)) if b > a => {
                self.best = other.best;
                self.argmax = other.argmax;
            }
            (Some(a), Some(b)) if b == a => self.argmax.extend(other.argmax),
            _ => {}
        }
        self
    }
}

/// Maximizes the edge Mostar index over the task's class.
pub fn maximize(task: &EnumerationTask, opts: MaximizeOptions) -> Result<EnumerationResult> {
    let hist = opts.histogram;
    let state = par_fold(
        task,
        opts.threads,
        MaxState::default,
        |acc, g| acc.absorb(g, edge_mostar_connected(g), hist),
        MaxState::merge,
    )?;
    let mut maximizers: Vec<CanonicalForm> = state.argmax.iter().map(canonical_form).collect();
    maximizers.sort();
    Ok(EnumerationResult {
        task: task.clone(),
        graphs_visited: state.visited,
        max_value: state.best,
        maximizers,
        histogram: hist.then_some(state.histogram),
    })
}

pub fn maximize_tricyclic(m: usize, opts: MaximizeOptions) -> Result<EnumerationResult> {
    maximize(&EnumerationTask::tricyclic(m)?, opts)
}

pub fn maximize_bicyclic(m: usize, opts: MaximizeOptions) -> Result<EnumerationResult> {
    if m < 5 {
        return Err(Error::Domain(format!("bicyclic graphs need at least 5 edges, got {m}")));
    }
    maximize(&EnumerationTask::bicyclic(m)?, opts)
}

pub fn maximize_unicyclic(m: usize, opts: MaximizeOptions) -> Result<EnumerationResult> {
    if m < 3 {
        return Err(Error::Domain(format!("unicyclic graphs need at least 3 edges, got {m}")));
    }
    maximize(&EnumerationTask::unicyclic(m)?, opts)
}

/// A graph together with its edge Mostar index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScoredGraph {
    pub form: CanonicalForm,
    pub value: u64,
    pub graph: Graph,
}

/// Collects every class member for which `keep(value)` holds, sorted by
/// canonical form. The stored graph is the canonical representative.
pub fn collect_where<K>(task: &EnumerationTask, threads: usize, keep: K) -> Result<Vec<ScoredGraph>>
where
    K: Fn(u64) -> bool + Sync + Send,
{
    let mut out = par_fold(
        task,
        threads,
        Vec::new,
        |acc: &mut Vec<ScoredGraph>, g| {
            let value = edge_mostar_connected(g);
            if keep(value) {
                let lab = canonical_labeling(g);
                acc.push(ScoredGraph {
                    form: lab.form(),
                    value,
                    graph: lab.canonical_graph(),
                });
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use std::collections::HashSet;

    #[test]
    fn subsets_enumerates_combinations() {
        let all: Vec<u64> = subsets(4, 2).collect();
        assert_eq!(all, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(subsets(3, 0).count(), 0);
        assert_eq!(subsets(3, 4).count(), 0);
        assert_eq!(subsets(15, 4).count(), 1365);
    }

    #[test]
    fn complete_and_near_complete() {
        let k4 = collect(&EnumerationTask::new(4, 6).unwrap()).unwrap();
        assert_eq!(k4.len(), 1);
        assert_eq!(canonical_form(&k4[0]), canonical_form(&Graph::complete(4).unwrap()));
        assert_eq!(collect(&EnumerationTask::new(4, 5).unwrap()).unwrap().len(), 1);
    }

    #[test]
    fn trees_counts() {
        // Unlabeled trees on n vertices.
        let expect = [1, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106];
        for (n, &want) in expect.iter().enumerate().skip(1) {
            let task = EnumerationTask::new(n, n - 1).unwrap();
            assert_eq!(count(&task, 1).unwrap(), want, "trees on {n} vertices");
        }
    }

    #[test]
    fn infeasible_tasks_are_empty() {
        let task = EnumerationTask::tricyclic(5).unwrap();
        assert!(!task.feasible());
        let r = maximize(&task, MaximizeOptions::threads(2)).unwrap();
        assert_eq!(r.graphs_visited, 0);
        assert_eq!(r.max_value, None);
        assert!(r.maximizers.is_empty());
        assert!(matches!(EnumerationTask::new(17, 20), Err(Error::Capacity { .. })));
    }

    #[test]
    fn no_duplicates_at_order_eight() {
        let task = EnumerationTask::new(8, 10).unwrap();
        let graphs = collect(&task).unwrap();
        let forms: HashSet<_> = graphs.iter().map(canonical_form).collect();
        assert_eq!(forms.len(), graphs.len());
        assert!(graphs.iter().all(|g| g.size() == 10 && crate::graph::is_connected(g)));
    }

    #[test]
    fn tricyclic_six_is_k4() {
        let r = maximize_tricyclic(6, MaximizeOptions::threads(1)).unwrap();
        assert_eq!(r.graphs_visited, 1);
        assert_eq!(r.max_value, Some(0));
    }

    #[test]
    fn min_degree_filter() {
        let task = EnumerationTask::tricyclic(7).unwrap().min_degree(2);
        for g in collect(&task).unwrap() {
            assert!(g.min_degree() >= 2);
        }
    }
}
