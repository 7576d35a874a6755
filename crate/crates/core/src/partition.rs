use crate::error::{Error, Result};
use crate::graph::Stripped;
use crate::vertex_set::VertexSet;

/// A partition of `0..n` into non-empty, pairwise disjoint parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    parts: Vec<VertexSet>,
}

impl Partition {
    /// Validates and wraps `parts`; the given part order is kept.
    pub fn new(n: usize, parts: Vec<VertexSet>) -> Result<Self> {
        let mut seen = VertexSet::with_capacity(n);
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::InvalidPartition(format!("part {i} is empty")));
            }
            for v in part.iter() {
                if v >= n {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} out of range 0..{n}"
                    )));
                }
                if !seen.insert(v) {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} appears in more than one part"
                    )));
                }
            }
        }
        if seen.len() != n {
            let missing = (0..n).find(|&v| !seen.contains(v)).unwrap();
            return Err(Error::InvalidPartition(format!(
                "vertex {missing} is not covered"
            )));
        }
        Ok(Self { n, parts })
    }

    /// Parts in order of first appearance of their labels in `assignment`.
    pub fn from_assignment(assignment: &[usize]) -> Self {
        let mut relabel = std::collections::HashMap::new();
        let mut parts: Vec<VertexSet> = Vec::new();
        for (v, &a) in assignment.iter().enumerate() {
            let id = *relabel.entry(a).or_insert_with(|| {
                parts.push(VertexSet::with_capacity(assignment.len()));
                parts.len() - 1
            });
            parts[id].insert(v);
        }
        Self {
            n: assignment.len(),
            parts,
        }
    }

    pub fn trivial(n: usize) -> Self {
        Self::from_assignment(&vec![0; n])
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_assignment(&(0..n).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    /// Part index of every vertex.
    pub fn assignment(&self) -> Vec<usize> {
        let mut a = vec![0; self.n];
        for (i, part) in self.parts.iter().enumerate() {
            for v in part.iter() {
                a[v] = i;
            }
        }
        a
    }

    /// Restricted growth string: part labels renumbered by first appearance.
    pub fn rgs(&self) -> Vec<usize> {
        self.canonical().assignment()
    }

    /// Same partition with parts ordered by smallest member.
    pub fn canonical(&self) -> Self {
        let mut parts = self.parts.clone();
        parts.sort_by_key(|p| p.min());
        Self { n: self.n, parts }
    }

    /// Partition with parts `i` and `j` replaced by their union (placed at `min(i, j)`).
    pub fn merge(&self, i: usize, j: usize) -> Result<Self> {
        for idx in [i, j] {
            if idx >= self.parts.len() {
                return Err(Error::PartIndex {
                    index: idx,
                    parts: self.parts.len(),
                });
            }
        }
        if i == j {
            return Err(Error::InvalidArgument("cannot merge a part with itself".into()));
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let mut parts = self.parts.clone();
        let removed = parts.remove(hi);
        parts[lo] = parts[lo].union(&removed);
        Ok(Self { n: self.n, parts })
    }

    /// Lifts a partition of a stripped graph back to the original vertex set;
    /// every removed isolated vertex becomes its own part.
    pub fn lift(&self, stripped: &Stripped) -> Self {
        let n = stripped.original.len() + stripped.removed.len();
        let mut parts: Vec<VertexSet> = self
            .parts
            .iter()
            .map(|p| p.iter().map(|v| stripped.original[v]).collect())
            .collect();
        parts.extend(stripped.removed.iter().map(|v| [v].into_iter().collect()));
        Self { n, parts }.canonical()
    }

    /// Like [`lift`](Self::lift) but isolated vertices join the first part,
    /// so the number of parts does not grow. The score is unchanged.
    pub fn lift_into_first(&self, stripped: &Stripped) -> Self {
        let n = stripped.original.len() + stripped.removed.len();
        let mut parts: Vec<VertexSet> = self
            .parts
            .iter()
            .map(|p| p.iter().map(|v| stripped.original[v]).collect())
            .collect();
        match parts.first_mut() {
            Some(first) => stripped.removed.iter().for_each(|v| {
                first.insert(v);
            }),
            None => parts.push(stripped.removed.clone()),
        }
        Self { n, parts }.canonical()
    }
}
