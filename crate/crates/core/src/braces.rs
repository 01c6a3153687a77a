//! Pendant-tree stripping and skeleton classification of tricyclic braces.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, cut_vertices, cyclomatic_number, Graph};
use crate::graph6::write_graph6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraceDecomposition {
    pub brace: Graph,
    /// `vertex_map[i]` is the original label of brace vertex `i`.
    pub vertex_map: Vec<usize>,
    pub pendant_count: usize,
    /// Brace vertex (brace labels) to number of tree edges hanging there.
    pub attachment_profile: BTreeMap<usize, usize>,
}

/// Repeatedly removes degree-1 vertices.
pub fn strip_pendants(g: &Graph) -> Result<BraceDecomposition> {
    let cycles = cyclomatic_number(g)?;
    if cycles == 0 {
        return Err(Error::Domain("a tree has an empty brace".into()));
    }
    let mut keep = g.all();
    loop {
        let leaves: u64 = bits(keep)
            .filter(|&v| (g.row(v) & keep).count_ones() <= 1)
            .fold(0, |acc, v| acc | 1 << v);
        if leaves == 0 {
            break;
        }
        keep &= !leaves;
    }
    let (brace, vertex_map) = g.induced(keep);
    let removed = g.all() & !keep;
    let mut attachment_profile = BTreeMap::new();
    for (i, &v) in vertex_map.iter().enumerate() {
        let hanging = (g.reach(v, removed | 1 << v) & removed).count_ones() as usize;
        if hanging > 0 {
            attachment_profile.insert(i, hanging);
        }
    }
    Ok(BraceDecomposition {
        brace,
        vertex_map,
        pendant_count: removed.count_ones() as usize,
        attachment_profile,
    })
}

/// A maximal path of degree-2 vertices between branch vertices. A path with
/// equal ends is a cycle hanging at one branch vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SkeletonPath {
    pub ends: (usize, usize),
    pub length: usize,
    /// First interior vertex walking from `ends.0`, if any.
    pub first_inner: Option<usize>,
}

impl SkeletonPath {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }
}

/// The multigraph left after suppressing degree-2 vertices. A bare cycle has
/// no branch vertices and a single loop anchored at vertex 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skeleton {
    pub branch_vertices: Vec<usize>,
    pub paths: Vec<SkeletonPath>,
}

impl Skeleton {
    pub fn is_trivial(&self) -> bool {
        self.branch_vertices.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.paths.iter().map(|p| p.length).collect();
        out.sort_unstable();
        out
    }

    /// Number of paths joining branch vertices `a` and `b`.
    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        let key = (a.min(b), a.max(b));
        self.paths.iter().filter(|p| p.ends == key).count()
    }
}

pub fn skeleton(brace: &Graph) -> Result<Skeleton> {
    if brace.order() == 0 || brace.min_degree() < 2 {
        return Err(Error::Precondition(
            "skeleton needs a nonempty graph of minimum degree 2".into(),
        ));
    }
    crate::invariants::ensure_connected(brace)?;
    let branch: Vec<usize> = (0..brace.order()).filter(|&v| brace.degree(v) >= 3).collect();
    if branch.is_empty() {
        return Ok(Skeleton {
            branch_vertices: branch,
            paths: vec![SkeletonPath {
                ends: (0, 0),
                length: brace.order(),
                first_inner: brace.neighbors(0).next(),
            }],
        });
    }
    let is_branch = |v: usize| brace.degree(v) >= 3;
    let mut paths = Vec::new();
    for &b in &branch {
        for w in brace.neighbors(b) {
            let (mut prev, mut cur, mut length) = (b, w, 1);
            while !is_branch(cur) {
                let next = brace
                    .neighbors(cur)
                    .find(|&x| x != prev)
                    .expect("degree-2 vertex has another neighbour");
                prev = cur;
                cur = next;
                length += 1;
            }
            // Each path is found once from each end; keep one direction.
            if (b, w) <= (cur, prev) {
                let (ends, first_inner) = if b <= cur {
                    ((b, cur), (length > 1).then_some(w))
                } else {
                    ((cur, b), (length > 1).then_some(prev))
                };
                paths.push(SkeletonPath {
                    ends,
                    length,
                    first_inner,
                });
            }
        }
    }
    paths.sort();
    Ok(Skeleton {
        branch_vertices: branch,
        paths,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BraceKind {
    #[serde(rename = "ALPHA_1")]
    Alpha1,
    #[serde(rename = "ALPHA_2")]
    Alpha2,
    #[serde(rename = "ALPHA_3")]
    Alpha3,
    #[serde(rename = "ALPHA_4")]
    Alpha4,
    CompositeA,
    NotTricyclic,
}

impl fmt::Display for BraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BraceKind::Alpha1 => "ALPHA_1",
            BraceKind::Alpha2 => "ALPHA_2",
            BraceKind::Alpha3 => "ALPHA_3",
            BraceKind::Alpha4 => "ALPHA_4",
            BraceKind::CompositeA => "COMPOSITE_A",
            BraceKind::NotTricyclic => "NOT_TRICYCLIC",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraceClass {
    pub kind: BraceKind,
    pub path_parameters: Vec<usize>,
}

impl BraceClass {
    pub fn is(&self, kind: BraceKind, params: &[usize]) -> bool {
        let mut sorted = params.to_vec();
        sorted.sort_unstable();
        self.kind == kind && self.path_parameters == sorted
    }
}

impl fmt::Display for BraceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.path_parameters.is_empty() {
            let p: Vec<String> = self.path_parameters.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", p.join(","))?;
        }
        Ok(())
    }
}

/// Classifies a connected graph by the skeleton of its brace.
pub fn classify(g: &Graph) -> Result<BraceClass> {
    if cyclomatic_number(g)? != 3 {
        return Ok(BraceClass {
            kind: BraceKind::NotTricyclic,
            path_parameters: Vec::new(),
        });
    }
    let brace = strip_pendants(g)?.brace;
    let sk = skeleton(&brace)?;
    let kind = if cut_vertices(&brace) != 0 {
        BraceKind::CompositeA
    } else {
        match sk.branch_vertices.len() {
            2 => BraceKind::Alpha3,
            3 => BraceKind::Alpha2,
            4 => {
                let b = &sk.branch_vertices;
                let all_pairs = (0..4).all(|i| (i + 1..4).all(|j| sk.multiplicity(b[i], b[j]) == 1));
                if all_pairs {
                    BraceKind::Alpha1
                } else {
                    BraceKind::Alpha4
                }
            }
            k => unreachable!("2-connected tricyclic skeleton with {k} branch vertices"),
        }
    };
    Ok(BraceClass {
        kind,
        path_parameters: sk.lengths(),
    })
}

/// Splits a composite tricyclic brace at a cut vertex into a bicyclic and a
/// unicyclic part sharing that vertex. Parts keep the brace's labels through
/// the returned vertex maps.
pub fn composite_split(brace: &Graph) -> Option<CompositeSplit> {
    for c in bits(cut_vertices(brace)) {
        let rest = brace.all() & !(1 << c);
        let mut comps = Vec::new();
        let mut left = rest;
        while left != 0 {
            let s = left.trailing_zeros() as usize;
            let comp = brace.reach(s, rest);
            comps.push(comp | 1 << c);
            left &= !comp;
        }
        let cyc = |mask: u64| {
            let (h, _) = brace.induced(mask);
            cyclomatic_number(&h).unwrap_or(0)
        };
        let parts: Vec<(u64, usize)> = comps.iter().map(|&m| (m, cyc(m))).collect();
        if let Some(&(uni, _)) = parts.iter().find(|p| p.1 == 1) {
            let others = parts
                .iter()
                .filter(|p| p.0 != uni)
                .fold(0u64, |acc, p| acc | p.0);
            if cyc(others) == 2 {
                let (bicyclic, bicyclic_map) = brace.induced(others);
                let (unicyclic, unicyclic_map) = brace.induced(uni);
                return Some(CompositeSplit {
                    cut_vertex: c,
                    bicyclic,
                    bicyclic_map,
                    unicyclic,
                    unicyclic_map,
                });
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeSplit {
    pub cut_vertex: usize,
    pub bicyclic: Graph,
    pub bicyclic_map: Vec<usize>,
    pub unicyclic: Graph,
    pub unicyclic_map: Vec<usize>,
}

/// Report row: graph6, class, sorted path parameters.
pub fn report_row(g: &Graph) -> Result<String> {
    let c = classify(g)?;
    let p: Vec<String> = c.path_parameters.iter().map(|x| x.to_string()).collect();
    Ok(format!("{},{},{}", write_graph6(g), c.kind, p.join(" ")))
}

/// Two hubs joined by internally disjoint paths of the given lengths. Hubs
/// are 0 and 1; interior vertices follow path by path.
pub fn theta(lengths: &[usize]) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut next = 2;
    for &len in lengths {
        if len == 0 {
            return Err(Error::Domain("path length must be positive".into()));
        }
        let mut prev = 0;
        for _ in 1..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1));
    }
    Graph::from_edges(next, &edges)
}

/// Joins `a` and `b` by a new path of `len` edges through fresh vertices.
pub fn add_path(g: &Graph, a: usize, b: usize, len: usize) -> Result<Graph> {
    if len == 0 {
        return Err(Error::Domain("path length must be positive".into()));
    }
    let mut h = g.clone();
    let mut prev = a;
    for _ in 1..len {
        let x = h.push_vertex()?;
        h.insert_edge(prev, x)?;
        prev = x;
    }
    h.insert_edge(prev, b)?;
    Ok(h)
}

/// Subdivision of a multigraph on `order` branch vertices: each
/// `(a, b, len)` becomes a path of `len` edges.
pub fn subdivided(order: usize, paths: &[(usize, usize, usize)]) -> Result<Graph> {
    let mut g = Graph::empty(order)?;
    for &(a, b, len) in paths {
        g = add_path(&g, a, b, len)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::dot_product;

    fn three_squares() -> Graph {
        let c4 = Graph::cycle(4).unwrap();
        let two = dot_product(&c4, 0, &c4, 0).unwrap();
        dot_product(&two, 0, &c4, 0).unwrap()
    }

    #[test]
    fn strip_examples() {
        let s94 = Graph::cycle(4).unwrap().with_pendants(0, 5).unwrap();
        let d = strip_pendants(&s94).unwrap();
        assert_eq!(d.brace, Graph::cycle(4).unwrap());
        assert_eq!(d.pendant_count, 5);
        assert_eq!(d.attachment_profile, BTreeMap::from([(0, 5)]));

        let a0 = three_squares().with_pendants(0, 3).unwrap();
        let d = strip_pendants(&a0).unwrap();
        assert_eq!(d.brace, three_squares());
        assert_eq!(d.pendant_count, 3);

        let c6 = Graph::cycle(6).unwrap();
        let d = strip_pendants(&c6).unwrap();
        assert_eq!(d.brace, c6);
        assert_eq!(d.pendant_count, 0);
        assert!(d.attachment_profile.is_empty());

        assert!(matches!(strip_pendants(&Graph::path(5).unwrap()), Err(Error::Domain(_))));
    }

    #[test]
    fn deep_trees_are_counted_at_their_root() {
        // Triangle with a path of length 3 hanging at vertex 1.
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (1, 3), (3, 4), (4, 5)]).unwrap();
        let d = strip_pendants(&g).unwrap();
        assert_eq!(d.pendant_count, 3);
        assert_eq!(d.attachment_profile, BTreeMap::from([(1, 3)]));
    }

    #[test]
    fn skeleton_examples() {
        let h1 = theta(&[1, 2, 2, 2]).unwrap();
        let sk = skeleton(&h1).unwrap();
        assert_eq!(sk.branch_vertices, vec![0, 1]);
        assert_eq!(sk.lengths(), vec![1, 2, 2, 2]);

        let sk = skeleton(&Graph::complete(4).unwrap()).unwrap();
        assert_eq!(sk.branch_vertices.len(), 4);
        assert_eq!(sk.lengths(), vec![1; 6]);

        let sk = skeleton(&three_squares()).unwrap();
        assert_eq!(sk.branch_vertices, vec![0]);
        assert!(sk.paths.iter().all(|p| p.is_loop() && p.length == 4));
        assert_eq!(sk.paths.len(), 3);

        let sk = skeleton(&Graph::cycle(5).unwrap()).unwrap();
        assert!(sk.is_trivial());
        assert_eq!(sk.lengths(), vec![5]);
    }

    #[test]
    fn classify_examples() {
        let h1 = theta(&[1, 2, 2, 2]).unwrap().with_pendants(0, 2).unwrap();
        assert!(classify(&h1).unwrap().is(BraceKind::Alpha3, &[1, 2, 2, 2]));
        let a0 = three_squares().with_pendants(0, 1).unwrap();
        assert_eq!(classify(&a0).unwrap().kind, BraceKind::CompositeA);
        let k4 = Graph::complete(4).unwrap().with_pendants(2, 3).unwrap();
        assert!(classify(&k4).unwrap().is(BraceKind::Alpha1, &[1; 6]));
        assert_eq!(classify(&Graph::cycle(5).unwrap()).unwrap().kind, BraceKind::NotTricyclic);
        // x-y twice, x-z twice, y-z once.
        let a2 = subdivided(3, &[(0, 1, 1), (0, 1, 2), (0, 2, 1), (0, 2, 2), (1, 2, 2)]).unwrap();
        assert!(classify(&a2).unwrap().is(BraceKind::Alpha2, &[1, 1, 2, 2, 2]));
        // A 4-cycle of branch vertices with two opposite sides doubled.
        let a4 = subdivided(4, &[(0, 1, 1), (0, 1, 2), (1, 2, 1), (2, 3, 1), (2, 3, 2), (3, 0, 1)]).unwrap();
        assert_eq!(classify(&a4).unwrap().kind, BraceKind::Alpha4);
    }

    #[test]
    fn composite_split_of_three_squares() {
        let s = composite_split(&three_squares()).unwrap();
        assert_eq!(s.cut_vertex, 0);
        assert_eq!(cyclomatic_number(&s.bicyclic).unwrap(), 2);
        assert_eq!(cyclomatic_number(&s.unicyclic).unwrap(), 1);
        assert_eq!(s.bicyclic.size() + s.unicyclic.size(), 12);
    }
}
