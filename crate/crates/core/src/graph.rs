//! Simple undirected graphs with dense vertex indices.

use std::collections::{HashMap, HashSet};

use num_traits::{Float, FromPrimitive};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Immutable simple graph. Vertices are `0..n`; each carries an original label.
#[derive(Clone, Debug)]
pub struct Graph {
    edges: Vec<(usize, usize)>,
    /// Sorted neighbour lists.
    adj: Vec<Vec<usize>>,
    labels: Vec<String>,
}

/// Internal edge count, volume and boundary size of a vertex set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SetStats {
    pub internal: u64,
    pub volume: u64,
    pub boundary: u64,
}

/// Incremental constructor that maps labels to dense indices in order of
/// first appearance and rejects loops and repeated edges.
#[derive(Default)]
pub struct GraphBuilder {
    index: HashMap<String, usize>,
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    seen: HashSet<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        i
    }

    /// Adds edge `u`–`v`; `line` is reported in errors.
    pub fn edge(&mut self, u: &str, v: &str, line: usize) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop {
                line,
                label: u.to_string(),
            });
        }
        let a = self.vertex(u);
        let b = self.vertex(v);
        let key = (a.min(b), a.max(b));
        if !self.seen.insert(key) {
            return Err(Error::DuplicateEdge {
                line,
                u: u.to_string(),
                v: v.to_string(),
            });
        }
        self.edges.push(key);
        Ok(())
    }

    pub fn build(self) -> Graph {
        Graph::assemble(self.labels, self.edges)
    }
}

impl Graph {
    /// Builds a graph from labelled edges plus labels of isolated vertices.
    pub fn from_labeled_edges(edges: &[(&str, &str)], isolated: &[&str]) -> Result<Self> {
        let mut b = GraphBuilder::new();
        for (i, (u, v)) in edges.iter().enumerate() {
            b.edge(u, v, i + 1)?;
        }
        for v in isolated {
            b.vertex(v);
        }
        Ok(b.build())
    }

    /// Builds a graph on `0..n` whose labels are the decimal indices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut b = GraphBuilder::new();
        for v in 0..n {
            b.vertex(&v.to_string());
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("edge endpoint out of range 0..{n}"),
                });
            }
            b.edge(&u.to_string(), &v.to_string(), i + 1)?;
        }
        Ok(b.build())
    }

    fn assemble(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Self {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self { edges, adj, labels }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> u64 {
        self.edges.len() as u64
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> u64 {
        self.adj[v].len() as u64
    }

    pub fn max_degree(&self) -> u64 {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        self.adj[v].iter().copied().collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Adjacency bit masks, available when `n ≤ 64`.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.n() > 64 {
            return None;
        }
        Some(
            (0..self.n())
                .map(|v| self.adj[v].iter().fold(0u64, |acc, &u| acc | 1 << u))
                .collect(),
        )
    }

    pub fn set_stats(&self, set: &VertexSet) -> SetStats {
        let mut volume = 0;
        let mut twice_internal = 0;
        for v in set.iter() {
            volume += self.degree(v);
            twice_internal += self.adj[v].iter().filter(|&&u| set.contains(u)).count() as u64;
        }
        let internal = twice_internal / 2;
        SetStats {
            internal,
            volume,
            boundary: volume - twice_internal,
        }
    }

    /// Number of edges with one endpoint in `a` and the other in `b` (disjoint sets).
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> u64 {
        a.iter()
            .map(|v| self.adj[v].iter().filter(|&&u| b.contains(u)).count() as u64)
            .sum()
    }

    pub fn is_connected_set(&self, set: &VertexSet) -> bool {
        let Some(start) = set.min() else {
            return true;
        };
        let mut seen = VertexSet::with_capacity(self.n());
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if set.contains(u) && seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == set.len()
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_set(&VertexSet::full(self.n()))
    }

    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut set = VertexSet::with_capacity(self.n());
            comp[s] = id;
            set.insert(s);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if comp[u] == usize::MAX {
                        comp[u] = id;
                        set.insert(u);
                        stack.push(u);
                    }
                }
            }
            out.push(set);
        }
        out
    }

    pub fn isolated_vertices(&self) -> VertexSet {
        (0..self.n()).filter(|&v| self.adj[v].is_empty()).collect()
    }

    /// Subgraph induced by `keep`, with vertices renumbered in increasing order.
    /// Returns the graph and the old index of each new vertex.
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let old: Vec<usize> = keep.iter().filter(|&v| v < self.n()).collect();
        let mut new_index = vec![usize::MAX; self.n()];
        for (i, &v) in old.iter().enumerate() {
            new_index[v] = i;
        }
        let labels = old.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_index[u] != usize::MAX && new_index[v] != usize::MAX)
            .map(|&(u, v)| (new_index[u], new_index[v]))
            .collect();
        (Graph::assemble(labels, edges), old)
    }

    /// Removes isolated vertices. Does not change the maximum modularity.
    pub fn strip_isolated(&self) -> Stripped {
        let removed = self.isolated_vertices();
        let keep = VertexSet::full(self.n()).difference(&removed);
        let (graph, original) = self.induced(&keep);
        Stripped {
            graph,
            removed,
            original,
        }
    }

    /// Copy of this graph with `k` extra isolated vertices appended.
    pub fn with_isolated(&self, k: usize) -> Graph {
        let mut labels = self.labels.clone();
        let mut next = 0;
        while labels.len() < self.n() + k {
            let candidate = format!("iso{next}");
            next += 1;
            if !labels.contains(&candidate) {
                labels.push(candidate);
            }
        }
        Graph::assemble(labels, self.edges.clone())
    }

    /// Copy of this graph with vertices renamed by `perm` (old `v` becomes `perm[v]`).
    pub fn relabeled(&self, perm: &[usize]) -> Graph {
        let mut labels = vec![String::new(); self.n()];
        for v in 0..self.n() {
            labels[perm[v]] = self.labels[v].clone();
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        Graph::assemble(labels, edges)
    }
}

/// Result of [`Graph::strip_isolated`].
#[derive(Clone, Debug)]
pub struct Stripped {
    pub graph: Graph,
    /// Isolated vertices of the original graph.
    pub removed: VertexSet,
    /// `original[i]` is the index in the original graph of stripped vertex `i`.
    pub original: Vec<usize>,
}

/// `max(0, 1 − 2·√((width+1)·Δ/m))`, a lower bound on `q*` valid whenever
/// `width` is at least the treewidth. Rounding error is below `1e-12` for `f64`.
pub fn tw_degree_lower_bound<F: Float + FromPrimitive>(g: &Graph, width: usize) -> F {
    let m = g.m();
    if m == 0 {
        return F::one();
    }
    let load = F::from_u64((width as u64 + 1) * g.max_degree()).unwrap() / F::from_u64(m).unwrap();
    let bound = F::one() - F::from_u8(2).unwrap() * load.sqrt();
    bound.max(F::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn build_from_labels() {
        let g = Graph::from_labeled_edges(&[("a", "b")], &[]).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        let g = two_triangles();
        assert_eq!((g.n(), g.m()), (6, 6));
        assert!((0..6).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn rejects_duplicates_and_loops() {
        let err = Graph::from_labeled_edges(&[("a", "b"), ("b", "a")], &[]).unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge { line: 2, .. }));
        let err = Graph::from_labeled_edges(&[("a", "a")], &[]).unwrap_err();
        assert!(matches!(err, Error::SelfLoop { .. }));
    }

    #[test]
    fn set_stats_examples() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let all = VertexSet::full(3);
        assert_eq!(
            tri.set_stats(&all),
            SetStats { internal: 3, volume: 6, boundary: 0 }
        );
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let ab: VertexSet = [0, 1].into_iter().collect();
        assert_eq!(
            path.set_stats(&ab),
            SetStats { internal: 1, volume: 3, boundary: 1 }
        );
        let g = two_triangles();
        let t: VertexSet = [0, 1, 2].into_iter().collect();
        assert_eq!(
            g.set_stats(&t),
            SetStats { internal: 3, volume: 6, boundary: 0 }
        );
    }

    #[test]
    fn strip_examples() {
        let g = Graph::from_labeled_edges(&[("u", "v")], &["x", "y", "z"]).unwrap();
        let s = g.strip_isolated();
        assert_eq!((s.graph.n(), s.graph.m()), (2, 1));
        assert_eq!(s.removed.len(), 3);

        let empty = Graph::from_edges(5, &[]).unwrap();
        let s = empty.strip_isolated();
        assert_eq!(s.graph.n(), 0);
        assert_eq!(s.removed.len(), 5);

        let s = two_triangles().strip_isolated();
        assert_eq!(s.graph.n(), 6);
        assert!(s.removed.is_empty());
    }

    #[test]
    fn component_examples() {
        let comps = two_triangles().connected_components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 3));
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(c5.connected_components().len(), 1);
        assert_eq!(Graph::from_edges(4, &[]).unwrap().connected_components().len(), 4);
    }

    #[test]
    fn lower_bound_examples() {
        let path: Vec<(usize, usize)> = (0..99).map(|i| (i, i + 1)).collect();
        let p100 = Graph::from_edges(100, &path).unwrap();
        let lb: f64 = tw_degree_lower_bound(&p100, 1);
        let expected = 1.0 - 2.0 * (4.0f64 / 99.0).sqrt();
        assert!((lb - expected).abs() < 1e-12);
        assert!((lb - 0.598).abs() < 1e-3);

        let star: Vec<(usize, usize)> = (1..10).map(|i| (0, i)).collect();
        let k19 = Graph::from_edges(10, &star).unwrap();
        assert_eq!(tw_degree_lower_bound::<f64>(&k19, 1), 0.0);
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(tw_degree_lower_bound::<f32>(&k4, 3), 0.0);
    }
}
