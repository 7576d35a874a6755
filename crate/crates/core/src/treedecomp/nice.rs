use std::collections::VecDeque;

use super::{check, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted bag contents.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// A rooted nice tree decomposition. Node ids are topologically sorted:
/// every child has a smaller id than its parent, and the root is last.
///
/// Leaves hold a single vertex. Bags are non-empty unless the source
/// decomposition had width 0 and several nodes, where two disjoint bags can
/// only be bridged through an empty one.
#[derive(Clone, Debug)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &NiceNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|t| t.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn count(&self, pred: impl Fn(&NodeKind) -> bool) -> usize {
        self.nodes.iter().filter(|t| pred(&t.kind)).count()
    }

    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|t| t.bag.iter().copied().collect()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(p, t)| t.children.iter().map(move |&c| (c, p)))
            .collect();
        TreeDecomposition::new(bags, edges).expect("nice decompositions are trees")
    }

    /// Checks the local shape rules of every node kind.
    pub fn check_shape(&self) -> std::result::Result<(), String> {
        for (id, t) in self.nodes.iter().enumerate() {
            if t.children.iter().any(|&c| c >= id) {
                return Err(format!("node {id} has a child with a larger id"));
            }
            let child_bag = |i: usize| &self.nodes[t.children[i]].bag;
            let ok = match t.kind {
                NodeKind::Leaf => t.children.is_empty() && t.bag.len() == 1,
                NodeKind::Introduce(v) => {
                    t.children.len() == 1 && {
                        let mut expect = child_bag(0).clone();
                        expect.push(v);
                        expect.sort_unstable();
                        !child_bag(0).contains(&v) && expect == t.bag
                    }
                }
                NodeKind::Forget(v) => {
                    t.children.len() == 1 && {
                        let expect: Vec<usize> =
                            child_bag(0).iter().copied().filter(|&u| u != v).collect();
                        child_bag(0).contains(&v) && expect == t.bag
                    }
                }
                NodeKind::Join => {
                    t.children.len() == 2 && *child_bag(0) == t.bag && *child_bag(1) == t.bag
                }
            };
            if !ok {
                return Err(format!("node {id} ({:?}) violates its kind's shape", t.kind));
            }
        }
        Ok(())
    }
}

struct Builder {
    nodes: Vec<NiceNode>,
    bridge_width: bool,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }

    fn introduce(&mut self, id: usize, v: usize) -> usize {
        let mut bag = self.nodes[id].bag.clone();
        bag.push(v);
        bag.sort_unstable();
        self.push(NodeKind::Introduce(v), bag, vec![id])
    }

    fn forget(&mut self, id: usize, v: usize) -> usize {
        let bag = self.nodes[id].bag.iter().copied().filter(|&u| u != v).collect();
        self.push(NodeKind::Forget(v), bag, vec![id])
    }

    fn chain_from_leaf(&mut self, bag: &[usize]) -> usize {
        let mut id = self.push(NodeKind::Leaf, vec![bag[0]], vec![]);
        for &v in &bag[1..] {
            id = self.introduce(id, v);
        }
        id
    }

    /// Walks from the top of a child's chain to `to` through forgets, then
    /// introduces.
    fn transition(&mut self, mut id: usize, to: &[usize]) -> usize {
        let from = self.nodes[id].bag.clone();
        let shared = from.iter().any(|v| to.contains(v));
        if !shared && self.bridge_width && !from.is_empty() {
            let x = from[0];
            for &v in &from[1..] {
                id = self.forget(id, v);
            }
            id = self.introduce(id, to[0]);
            id = self.forget(id, x);
            for &v in &to[1..] {
                id = self.introduce(id, v);
            }
            return id;
        }
        for &v in from.iter().filter(|v| !to.contains(v)) {
            id = self.forget(id, v);
        }
        for &v in to.iter().filter(|v| !from.contains(v)) {
            id = self.introduce(id, v);
        }
        id
    }
}

/// Converts a valid decomposition of `g` to nice form of the same width,
/// rooted at a smallest non-empty bag. Empty bags are contracted first.
pub fn make_nice(g: &Graph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    check(g, td)?;
    let td = td.without_empty_bags();
    if td.is_empty() {
        return Err(Error::InvalidArgument(
            "decomposition has no non-empty bag".into(),
        ));
    }
    let bags: Vec<Vec<usize>> = td.bags().iter().map(VertexSet::to_vec).collect();
    let adj = td.neighbours();
    // Ties prefer tree leaves, so path decompositions stay join-free.
    let root = (0..bags.len())
        .min_by_key(|&t| (bags[t].len(), adj[t].len().min(2), t))
        .unwrap();
    let mut parent = vec![usize::MAX; bags.len()];
    let mut order = Vec::with_capacity(bags.len());
    let mut queue = VecDeque::from([root]);
    parent[root] = root;
    while let Some(t) = queue.pop_front() {
        order.push(t);
        for &u in &adj[t] {
            if parent[u] == usize::MAX {
                parent[u] = t;
                queue.push_back(u);
            }
        }
    }
    let mut builder = Builder {
        nodes: Vec::new(),
        bridge_width: td.width() >= 1,
    };
    let mut top = vec![usize::MAX; bags.len()];
    for &t in order.iter().rev() {
        let children: Vec<usize> = adj[t].iter().copied().filter(|&u| u != parent[t]).collect();
        let chains: Vec<usize> = children
            .iter()
            .map(|&c| builder.transition(top[c], &bags[t]))
            .collect();
        top[t] = match chains.split_first() {
            None => builder.chain_from_leaf(&bags[t]),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &c| {
                builder.push(NodeKind::Join, bags[t].clone(), vec![acc, c])
            }),
        };
    }
    debug_assert_eq!(top[root], builder.nodes.len() - 1);
    Ok(NiceTreeDecomposition {
        nodes: builder.nodes,
    })
}
