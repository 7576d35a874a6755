use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// A minimum vertex cover, found by iterative deepening over
/// [`vertex_cover_at_most`]. Exponential in the cover size.
pub fn min_vertex_cover(g: &Graph) -> VertexSet {
    (0..=g.n())
        .find_map(|k| vertex_cover_at_most(g, k))
        .expect("the whole vertex set is a cover")
}

/// A vertex cover of size at most `k`, if one exists.
///
/// Search tree: a vertex `v` of maximum remaining degree is either in the
/// cover or all of its neighbours are.
pub fn vertex_cover_at_most(g: &Graph, k: usize) -> Option<VertexSet> {
    let alive = VertexSet::full(g.n());
    let mut cover = VertexSet::with_capacity(g.n());
    branch(g, alive, k, &mut cover).then_some(cover)
}

fn branch(g: &Graph, alive: VertexSet, k: usize, cover: &mut VertexSet) -> bool {
    let mut best = None;
    let mut edges = 0;
    for v in alive.iter() {
        let d = g.neighbor_set(v).intersection(&alive).len();
        edges += d;
        if d > 0 && best.is_none_or(|(_, bd)| d > bd) {
            best = Some((v, d));
        }
    }
    let Some((v, d)) = best else {
        return true;
    };
    // Each cover vertex removes at most `d` of the remaining edges.
    if k == 0 || edges / 2 > k * d {
        return false;
    }
    let mut without_v = alive.clone();
    without_v.remove(v);
    cover.insert(v);
    if branch(g, without_v, k - 1, cover) {
        return true;
    }
    cover.remove(v);
    if d <= k {
        let nbrs = g.neighbor_set(v).intersection(&alive);
        let rest = alive.difference(&nbrs);
        for u in nbrs.iter() {
            cover.insert(u);
        }
        if branch(g, rest, k - d, cover) {
            return true;
        }
        for u in nbrs.iter() {
            cover.remove(u);
        }
    }
    false
}

/// True if every edge of `g` has an endpoint in `cover`.
pub fn is_cover(g: &Graph, cover: &VertexSet) -> bool {
    g.edges().iter().all(|&(u, v)| cover.contains(u) || cover.contains(v))
}
