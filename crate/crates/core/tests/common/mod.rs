//! Oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use mostar::graph::is_connected;
use mostar::Graph;
use rand::Rng;

/// Smallest adjacency bitstring over all vertex orders that list vertices
/// by nondecreasing degree.
pub fn brute_canonical(n: usize, adj: &[u32]) -> u64 {
    let degree = |v: usize| adj[v].count_ones();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| degree(v));
    let mut best = u64::MAX;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match groups.last_mut() {
            Some(g) if degree(g[0]) == degree(v) => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    fn permute(groups: &mut [Vec<usize>], gi: usize, k: usize, f: &mut dyn FnMut(&[Vec<usize>])) {
        if gi == groups.len() {
            f(groups);
            return;
        }
        if k == groups[gi].len() {
            permute(groups, gi + 1, 0, f);
            return;
        }
        for i in k..groups[gi].len() {
            groups[gi].swap(k, i);
            permute(groups, gi, k + 1, f);
            groups[gi].swap(k, i);
        }
    }
    permute(&mut groups, 0, 0, &mut |gs| {
        let seq: Vec<usize> = gs.iter().flatten().copied().collect();
        let mut key = 0u64;
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if adj[seq[i]] >> seq[j] & 1 == 1 {
                    key |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(key);
    });
    best
}

/// Isomorphism classes of connected graphs with `n` vertices and `m`
/// edges, counted over all labeled graphs.
pub fn brute_count(n: usize, m: usize) -> usize {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut seen = HashSet::new();
    let mut chosen = Vec::with_capacity(m);
    fn rec(
        pairs: &[(usize, usize)],
        start: usize,
        m: usize,
        n: usize,
        chosen: &mut Vec<usize>,
        seen: &mut HashSet<u64>,
    ) {
        if chosen.len() == m {
            let mut adj = vec![0u32; n];
            for &i in chosen.iter() {
                let (u, v) = pairs[i];
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
            let edges: Vec<(usize, usize)> = chosen.iter().map(|&i| pairs[i]).collect();
            if is_connected(&Graph::from_edges(n, &edges).unwrap()) {
                seen.insert(brute_canonical(n, &adj));
            }
            return;
        }
        for i in start..pairs.len() {
            if pairs.len() - i < m - chosen.len() {
                break;
            }
            chosen.push(i);
            rec(pairs, i + 1, m, n, chosen, seen);
            chosen.pop();
        }
    }
    rec(&pairs, 0, m, n, &mut chosen, &mut seen);
    seen.len()
}

/// Random tree on `order` vertices with uniformly chosen parents.
pub fn random_tree<R: Rng>(rng: &mut R, order: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..order).map(|i| (rng.gen_range(0..i), i)).collect();
    Graph::from_edges(order, &edges).unwrap()
}

/// Random connected graph with at most `max_order` vertices: a random tree
/// plus each remaining pair with a random probability.
pub fn random_connected<R: Rng>(rng: &mut R, max_order: usize) -> Graph {
    let n = rng.gen_range(1..=max_order);
    let p: f64 = rng.gen_range(0.0..0.6);
    let mut g = random_tree(rng, n);
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.gen_bool(p) {
                g = g.with_edge(u, v).unwrap();
            }
        }
    }
    g
}
