use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::TreeDecomposition;
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// Elimination-ordering heuristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Heuristic {
    MinFill,
    MinDegree,
    /// Uniformly random order from the given seed.
    Random(u64),
}

/// Min-fill decomposition.
pub fn heuristic_decompose(g: &Graph) -> TreeDecomposition {
    decompose(g, Heuristic::MinFill)
}

pub fn decompose(g: &Graph, heuristic: Heuristic) -> TreeDecomposition {
    from_elimination_order(g, &elimination_order(g, heuristic))
}

fn fill_in(adj: &[VertexSet], v: usize) -> usize {
    let nbrs: Vec<usize> = adj[v].iter().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        missing += nbrs[i + 1..].iter().filter(|&&b| !adj[a].contains(b)).count();
    }
    missing
}

/// Greedy elimination order; ties go to the smaller degree, then smaller index.
pub fn elimination_order(g: &Graph, heuristic: Heuristic) -> Vec<usize> {
    let n = g.n();
    if let Heuristic::Random(seed) = heuristic {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        return order;
    }
    let mut adj: Vec<VertexSet> = (0..n).map(|v| g.neighbor_set(v)).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| {
                let deg = adj[v].len();
                match heuristic {
                    Heuristic::MinFill => (fill_in(&adj, v), deg, v),
                    _ => (0, deg, v),
                }
            })
            .unwrap();
        eliminate(&mut adj, v);
        alive[v] = false;
        order.push(v);
    }
    order
}

fn eliminate(adj: &mut [VertexSet], v: usize) {
    let nbrs: Vec<usize> = adj[v].iter().collect();
    for &a in &nbrs {
        adj[a].remove(v);
        for &b in &nbrs {
            if a != b {
                adj[a].insert(b);
            }
        }
    }
}

/// Decomposition with one bag per vertex: `{v}` plus its later neighbours in
/// the fill graph. Each bag hangs below the bag of its earliest-eliminated
/// later neighbour; roots of different components are chained.
pub fn from_elimination_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<VertexSet> = (0..n).map(|v| g.neighbor_set(v)).collect();
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let mut bag = adj[v].clone();
        bag.insert(v);
        match adj[v].iter().min_by_key(|&u| pos[u]) {
            Some(u) => edges.push((i, pos[u])),
            None => roots.push(i),
        }
        bags.push(bag);
        eliminate(&mut adj, v);
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(bags, edges).expect("elimination trees are acyclic")
}
