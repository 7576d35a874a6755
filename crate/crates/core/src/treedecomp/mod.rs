//! Tree decompositions: validation, heuristic construction, PACE `.td` I/O
//! and conversion to nice form.

mod heuristic;
mod nice;
mod pace;

use std::fmt;

pub use heuristic::{decompose, elimination_order, from_elimination_order, heuristic_decompose, Heuristic};
pub use nice::{make_nice, NiceNode, NiceTreeDecomposition, NodeKind};
pub use pace::{parse_td, write_td, PaceTd};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// Bags indexed by node id plus the undirected tree edges between nodes.
///
/// The node graph is always a tree (or empty): construction rejects cycles
/// and links the components of a forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<VertexSet>,
    edges: Vec<(usize, usize)>,
}

/// A violated decomposition condition together with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    VertexOutOfRange { node: usize, vertex: usize },
    MissingVertex { vertex: usize },
    UncoveredEdge { u: usize, v: usize },
    /// The nodes containing `vertex` split into several subtrees; `nodes`
    /// holds one representative of two of them.
    DisconnectedTrace { vertex: usize, nodes: (usize, usize) },
}

impl Violation {
    /// Same as `Display`, with vertices shown by their labels in `g`.
    pub fn describe(&self, g: &Graph) -> String {
        let label = |v: usize| {
            if v < g.n() {
                format!("`{}`", g.label(v))
            } else {
                format!("#{v}")
            }
        };
        match *self {
            Violation::VertexOutOfRange { node, vertex } => {
                format!("bag {node} contains unknown vertex {}", label(vertex))
            }
            Violation::MissingVertex { vertex } => {
                format!("vertex {} is in no bag", label(vertex))
            }
            Violation::UncoveredEdge { u, v } => {
                format!("edge {}-{} is in no bag", label(u), label(v))
            }
            Violation::DisconnectedTrace { vertex, nodes } => format!(
                "bags containing {} are disconnected (nodes {} and {})",
                label(vertex),
                nodes.0,
                nodes.1
            ),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::VertexOutOfRange { node, vertex } => {
                write!(f, "bag {node} contains unknown vertex {vertex}")
            }
            Violation::MissingVertex { vertex } => write!(f, "vertex {vertex} is in no bag"),
            Violation::UncoveredEdge { u, v } => write!(f, "edge {u}-{v} is in no bag"),
            Violation::DisconnectedTrace { vertex, nodes } => write!(
                f,
                "bags containing vertex {vertex} are disconnected (nodes {} and {})",
                nodes.0, nodes.1
            ),
        }
    }
}

impl TreeDecomposition {
    /// Builds a decomposition from bags and tree edges. Forest components are
    /// joined by an edge from node 0's component to the smallest node of each
    /// other component.
    pub fn new(bags: Vec<VertexSet>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let k = bags.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &edges {
            if a >= k || b >= k {
                return Err(Error::InvalidArgument(format!(
                    "tree edge {a}-{b} refers to a missing node"
                )));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(Error::InvalidArgument(format!(
                    "tree edge {a}-{b} closes a cycle"
                )));
            }
            parent[ra] = rb;
        }
        let mut edges = edges;
        for t in 1..k {
            let (r0, rt) = (find(&mut parent, 0), find(&mut parent, t));
            if r0 != rt {
                edges.push((0, t));
                parent[rt] = r0;
            }
        }
        Ok(Self { bags, edges })
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest bag size minus one (0 for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// The decomposition restricted to a subgraph: `new_index[v]` is the
    /// vertex's index in the subgraph or `None` if dropped. Nodes whose bag
    /// becomes empty are contracted away.
    pub fn restricted(&self, new_index: &[Option<usize>]) -> Self {
        let bags: Vec<VertexSet> = self
            .bags
            .iter()
            .map(|b| b.iter().filter_map(|v| new_index.get(v).copied().flatten()).collect())
            .collect();
        Self {
            bags,
            edges: self.edges.clone(),
        }
        .without_empty_bags()
    }

    /// Removes empty-bag nodes, reattaching their neighbours to one of them.
    pub fn without_empty_bags(&self) -> Self {
        let k = self.bags.len();
        let mut adj: Vec<std::collections::BTreeSet<usize>> =
            vec![Default::default(); k];
        for &(a, b) in &self.edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        let mut alive = vec![true; k];
        for t in 0..k {
            if !self.bags[t].is_empty() {
                continue;
            }
            alive[t] = false;
            let nbrs: Vec<usize> = std::mem::take(&mut adj[t]).into_iter().collect();
            for &u in &nbrs {
                adj[u].remove(&t);
            }
            if let Some((&hub, rest)) = nbrs.split_first() {
                for &u in rest {
                    adj[hub].insert(u);
                    adj[u].insert(hub);
                }
            }
        }
        let mut new_id = vec![usize::MAX; k];
        let mut bags = Vec::new();
        for t in 0..k {
            if alive[t] {
                new_id[t] = bags.len();
                bags.push(self.bags[t].clone());
            }
        }
        let mut edges = Vec::new();
        for t in 0..k {
            for &u in &adj[t] {
                if alive[t] && t < u {
                    edges.push((new_id[t], new_id[u]));
                }
            }
        }
        Self::new(bags, edges).expect("contraction keeps the node graph a forest")
    }
}

/// Checks the three decomposition conditions, returning every violation.
pub fn validate(g: &Graph, td: &TreeDecomposition) -> Vec<Violation> {
    let n = g.n();
    let mut out = Vec::new();
    let mut covered = VertexSet::with_capacity(n);
    for (t, bag) in td.bags.iter().enumerate() {
        for v in bag.iter() {
            if v >= n {
                out.push(Violation::VertexOutOfRange { node: t, vertex: v });
            } else {
                covered.insert(v);
            }
        }
    }
    for v in 0..n {
        if !covered.contains(v) {
            out.push(Violation::MissingVertex { vertex: v });
        }
    }
    for &(u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
            out.push(Violation::UncoveredEdge { u, v });
        }
    }
    let adj = td.neighbours();
    for v in 0..n {
        let holders: Vec<usize> = (0..td.len()).filter(|&t| td.bags[t].contains(v)).collect();
        let Some(&start) = holders.first() else {
            continue;
        };
        let mut seen = vec![false; td.len()];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            for &u in &adj[t] {
                if !seen[u] && td.bags[u].contains(v) {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if let Some(&other) = holders.iter().find(|&&t| !seen[t]) {
            out.push(Violation::DisconnectedTrace {
                vertex: v,
                nodes: (start, other),
            });
        }
    }
    out
}

/// `validate` as a `Result`.
pub fn check(g: &Graph, td: &TreeDecomposition) -> Result<()> {
    let violations = validate(g, td);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidDecomposition(violations))
    }
}
