//! Test-corpus generators: seeded random graphs and isomorphism-free
//! enumeration of small connected graphs.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Largest `n` accepted by [`connected_graphs`]; adjacency rows are `u16`.
pub const MAX_ENUMERATION_VERTICES: usize = 9;

/// `G(n, p)`: each pair is an edge independently with probability `p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("generated edges are simple")
}

/// A batch of seeded random graphs with `n` drawn from `sizes` and edge
/// density drawn from `[0.15, 0.85]`. Graph `i` uses seed `seed + i`.
pub fn random_batch(count: usize, sizes: std::ops::RangeInclusive<usize>, seed: u64) -> Vec<Graph> {
    (0..count as u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            let n = rng.gen_range(sizes.clone());
            let p = rng.gen_range(0.15..=0.85);
            gnp(n, p, rng.gen())
        })
        .collect()
}

/// Canonical form: the lexicographically largest adjacency-row sequence over
/// all relabellings that list vertices by non-increasing degree. Degree is a
/// relabelling invariant, so two graphs are isomorphic iff forms agree.
fn canonical(adj: &[u16]) -> Vec<u16> {
    let n = adj.len();
    let deg: Vec<u32> = adj.iter().map(|r| r.count_ones()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(deg[v]));
    let mut best: Option<Vec<u16>> = None;
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search(adj, &deg, &order, &mut perm, &mut used, &mut best);
    best.unwrap()
}

fn search(
    adj: &[u16],
    deg: &[u32],
    order: &[usize],
    perm: &mut Vec<usize>,
    used: &mut [bool],
    best: &mut Option<Vec<u16>>,
) {
    let n = adj.len();
    let pos = perm.len();
    if pos == n {
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let rows: Vec<u16> = perm
            .iter()
            .map(|&old| (0..n).filter(|&u| adj[old] >> u & 1 == 1).fold(0u16, |r, u| r | 1 << inv[u]))
            .collect();
        if best.as_ref().is_none_or(|b| rows > *b) {
            *best = Some(rows);
        }
        return;
    }
    let want = deg[order[pos]];
    for v in 0..n {
        if !used[v] && deg[v] == want {
            used[v] = true;
            perm.push(v);
            search(adj, deg, order, perm, used, best);
            perm.pop();
            used[v] = false;
        }
    }
}

fn to_graph(adj: &[u16]) -> Graph {
    let n = adj.len();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).filter(move |&v| adj[u] >> v & 1 == 1).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges).expect("generated edges are simple")
}

/// Every connected graph on `n` vertices, one per isomorphism class.
///
/// Every connected graph has a vertex whose removal keeps it connected, so
/// extending each class on `n − 1` vertices by a new vertex with a non-empty
/// neighbourhood reaches every class on `n`.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(
        (1..=MAX_ENUMERATION_VERTICES).contains(&n),
        "enumeration supports 1..={MAX_ENUMERATION_VERTICES} vertices"
    );
    let mut layer: Vec<Vec<u16>> = vec![vec![0]];
    for size in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for adj in &layer {
            for nbrs in 1u16..1 << (size - 1) {
                let mut ext: Vec<u16> = adj
                    .iter()
                    .enumerate()
                    .map(|(v, &row)| row | u16::from(nbrs >> v & 1 == 1) << (size - 1))
                    .collect();
                ext.push(nbrs);
                let form = canonical(&ext);
                if seen.insert(form.clone()) {
                    next.push(form);
                }
            }
        }
        layer = next;
    }
    layer.iter().map(|adj| to_graph(adj)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
        assert!(connected_graphs(5).iter().all(Graph::is_connected));
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        assert_eq!(gnp(9, 0.5, 3).edges(), gnp(9, 0.5, 3).edges());
        assert_eq!(gnp(5, 1.0, 0).m(), 10);
        assert_eq!(gnp(5, 0.0, 0).m(), 0);
        let batch = random_batch(20, 3..=8, 1);
        assert!(batch.iter().all(|g| (3..=8).contains(&g.n())));
    }
}
