//! Edge and vertex Mostar indices.
//!
//! For an edge `e = uv`, every other edge `f` is classified by comparing its
//! distances to `u` and `v`, where the distance from a vertex to an edge is
//! the smaller of the distances to its endpoints. Ties go to neither side and
//! `e` itself is left out. The edge Mostar index sums `|m_u - m_v|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_connected, DistanceMatrix, Edge, Graph};
use crate::graph6::write_graph6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub u: usize,
    pub v: usize,
    /// Edges strictly closer to `u`.
    #[serde(rename = "mu")]
    pub m_u: u64,
    /// Edges strictly closer to `v`.
    #[serde(rename = "mv")]
    pub m_v: u64,
    /// Other edges at equal distance from both endpoints.
    #[serde(rename = "eq")]
    pub equidistant: u64,
    pub psi: u64,
}

impl EdgeReport {
    pub fn edge(&self) -> Edge {
        Edge::new(self.u, self.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MostarSummary {
    pub graph6: String,
    pub edge_mostar: u64,
    #[serde(rename = "edges")]
    pub per_edge: Vec<EdgeReport>,
}

/// `min(d(x, f.u), d(x, f.v))`.
pub fn edge_vertex_distance(dm: &DistanceMatrix, f: Edge, x: usize) -> Option<u32> {
    match (dm.get(x, f.u), dm.get(x, f.v)) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

fn require_connected(g: &Graph) -> Result<DistanceMatrix> {
    let dm = DistanceMatrix::new(g);
    if !dm.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(dm)
}

fn classify_edge(dm: &DistanceMatrix, edges: &[Edge], idx: usize) -> EdgeReport {
    let e = edges[idx];
    let (mut m_u, mut m_v, mut eq) = (0u64, 0u64, 0u64);
    for (j, f) in edges.iter().enumerate() {
        if j == idx {
            continue;
        }
        let du = dm.hops(e.u, f.u).min(dm.hops(e.u, f.v));
        let dv = dm.hops(e.v, f.u).min(dm.hops(e.v, f.v));
        match du.cmp(&dv) {
            std::cmp::Ordering::Less => m_u += 1,
            std::cmp::Ordering::Greater => m_v += 1,
            std::cmp::Ordering::Equal => eq += 1,
        }
    }
    EdgeReport {
        u: e.u,
        v: e.v,
        m_u,
        m_v,
        equidistant: eq,
        psi: m_u.abs_diff(m_v),
    }
}

pub fn edge_report(g: &Graph, e: Edge) -> Result<EdgeReport> {
    if !g.has_edge(e.u, e.v) {
        return Err(Error::NotAnEdge(e.u, e.v));
    }
    let dm = require_connected(g)?;
    let edges = g.edge_list();
    let idx = edges.binary_search(&e).expect("edge present");
    Ok(classify_edge(&dm, &edges, idx))
}

/// Reports for every edge, in edge order.
pub fn edge_reports(g: &Graph) -> Result<Vec<EdgeReport>> {
    let dm = require_connected(g)?;
    let edges = g.edge_list();
    Ok((0..edges.len()).map(|i| classify_edge(&dm, &edges, i)).collect())
}

pub fn edge_mostar(g: &Graph) -> Result<u64> {
    let dm = require_connected(g)?;
    Ok(edge_mostar_with(g, &dm))
}

/// Edge Mostar index from precomputed distances of a connected graph.
pub fn edge_mostar_with(g: &Graph, dm: &DistanceMatrix) -> u64 {
    let edges = g.edge_list();
    let m = edges.len();
    let n = g.order();
    // dist_to_edge[x * m + j] = d(x, edges[j])
    let mut dist_to_edge = vec![0u8; n * m];
    for x in 0..n {
        for (j, f) in edges.iter().enumerate() {
            dist_to_edge[x * m + j] = dm.hops(x, f.u).min(dm.hops(x, f.v));
        }
    }
    let mut total = 0u64;
    for (i, e) in edges.iter().enumerate() {
        let ru = &dist_to_edge[e.u * m..(e.u + 1) * m];
        let rv = &dist_to_edge[e.v * m..(e.v + 1) * m];
        let mut diff = 0i64;
        for j in 0..m {
            if j != i {
                diff += (ru[j] < rv[j]) as i64 - (rv[j] < ru[j]) as i64;
            }
        }
        total += diff.unsigned_abs();
    }
    total
}

/// Edge Mostar index for a graph already known to be connected.
pub(crate) fn edge_mostar_connected(g: &Graph) -> u64 {
    edge_mostar_with(g, &DistanceMatrix::new(g))
}

/// Vertex Mostar index: `sum |n_u - n_v|` over edges, counting vertices
/// strictly closer to each endpoint.
pub fn vertex_mostar(g: &Graph) -> Result<u64> {
    let dm = require_connected(g)?;
    let mut total = 0u64;
    for e in g.edges() {
        let mut diff = 0i64;
        for x in 0..g.order() {
            let (du, dv) = (dm.hops(x, e.u), dm.hops(x, e.v));
            diff += (du < dv) as i64 - (dv < du) as i64;
        }
        total += diff.unsigned_abs();
    }
    Ok(total)
}

pub fn summarize(g: &Graph) -> Result<MostarSummary> {
    let per_edge = edge_reports(g)?;
    Ok(MostarSummary {
        graph6: write_graph6(g),
        edge_mostar: per_edge.iter().map(|r| r.psi).sum(),
        per_edge,
    })
}

impl MostarSummary {
    pub fn csv_header() -> &'static str {
        "graph6,edge_mostar,u,v,mu,mv,eq,psi"
    }

    /// One CSV row per edge.
    pub fn csv_rows(&self) -> Vec<String> {
        self.per_edge
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{},{}",
                    self.graph6, self.edge_mostar, r.u, r.v, r.m_u, r.m_v, r.equidistant, r.psi
                )
            })
            .collect()
    }
}

/// Checks connectivity without building a distance matrix.
pub fn ensure_connected(g: &Graph) -> Result<()> {
    if is_connected(g) {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}
