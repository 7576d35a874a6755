//! Exhaustive maximisation over set partitions, used as ground truth.
//!
//! Numerators are accumulated in `i128`: the oracle is capped at 64 vertices,
//! where every scaled value is far below `2^100`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::scalar::{ScaledScore, ScoreInt};
use crate::score::Solution;

pub const DEFAULT_CAP: usize = 12;
pub const RESTRICTED_CAP: usize = 14;

/// Which partitions [`brute_force`] searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    None,
    /// Only partitions whose parts are connected and, unless the vertex is
    /// isolated, have at least two vertices.
    ConnectedNoSingleton,
}

/// Restricted growth strings of length `n` in lexicographic order.
#[derive(Clone, Debug)]
pub struct RgsIter {
    current: Option<Vec<usize>>,
}

impl RgsIter {
    pub fn new(n: usize) -> Self {
        Self {
            current: Some(vec![0; n]),
        }
    }
}

impl Iterator for RgsIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let n = out.len();
        let mut prefix_max = vec![0; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(out[i - 1]);
        }
        let mut next = out.clone();
        for i in (1..n).rev() {
            if next[i] <= prefix_max[i] {
                next[i] += 1;
                next[i + 1..].iter_mut().for_each(|a| *a = 0);
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Every set partition of `0..n`, each exactly once.
pub fn iter_partitions(n: usize, cap: usize) -> Result<impl Iterator<Item = Partition>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot enumerate partitions of 0 vertices".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded {
            what: "partition enumeration",
            size: n,
            cap,
        });
    }
    Ok(RgsIter::new(n).map(|a| Partition::from_assignment(&a)))
}

fn checked(g: &Graph, cap: usize) -> Result<(Vec<u64>, i128)> {
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    let cap = cap.min(64);
    if g.n() > cap {
        return Err(Error::CapExceeded {
            what: "brute force",
            size: g.n(),
            cap,
        });
    }
    Ok((g.adjacency_masks().unwrap(), g.m() as i128))
}

fn finish<S: ScoreInt>(m: i128, best: i128, rgs: &[usize]) -> Solution<S> {
    Solution {
        q: ScaledScore::new(S::from_i128(best).unwrap(), m as u64),
        partition: Partition::from_assignment(rgs),
    }
}

pub fn brute_force<S: ScoreInt>(g: &Graph, restriction: Restriction) -> Result<Solution<S>> {
    let cap = match restriction {
        Restriction::None => DEFAULT_CAP,
        Restriction::ConnectedNoSingleton => RESTRICTED_CAP,
    };
    brute_force_capped(g, restriction, cap)
}

pub fn brute_force_capped<S: ScoreInt>(
    g: &Graph,
    restriction: Restriction,
    cap: usize,
) -> Result<Solution<S>> {
    match restriction {
        Restriction::None => {
            let mut sol = bounded(g, g.n(), cap)?;
            sol.partition = split_components(g, &sol.partition);
            Ok(sol)
        }
        Restriction::ConnectedNoSingleton => restricted(g, cap),
    }
}

/// Maximum over partitions with at most `c` parts.
pub fn brute_force_bounded<S: ScoreInt>(g: &Graph, c: usize) -> Result<Solution<S>> {
    if c == 0 {
        return Err(Error::InvalidArgument("part bound must be at least 1".into()));
    }
    bounded(g, c, DEFAULT_CAP)
}

pub fn brute_force_bounded_capped<S: ScoreInt>(
    g: &Graph,
    c: usize,
    cap: usize,
) -> Result<Solution<S>> {
    if c == 0 {
        return Err(Error::InvalidArgument("part bound must be at least 1".into()));
    }
    bounded(g, c, cap)
}

/// Splits every part into its connected components. Modularity cannot drop
/// (`4m²Δ = 2·vol(A₁)·vol(A₂)` per split), so an argmax stays an argmax.
fn split_components(g: &Graph, p: &Partition) -> Partition {
    let mut assignment = vec![0; g.n()];
    let mut next = 0;
    for part in p.parts() {
        let (sub, original) = g.induced(part);
        for comp in sub.connected_components() {
            for local in comp.iter() {
                assignment[original[local]] = next;
            }
            next += 1;
        }
    }
    Partition::from_assignment(&assignment)
}

struct Dfs<'a> {
    adj: &'a [u64],
    m: i128,
    max_parts: usize,
    blocks: Vec<u64>,
    internal: Vec<i128>,
    volume: Vec<i128>,
    rgs: Vec<usize>,
    best: Option<(i128, Vec<usize>)>,
}

impl Dfs<'_> {
    fn run(&mut self, v: usize) {
        if v == self.adj.len() {
            let value: i128 = self
                .internal
                .iter()
                .zip(&self.volume)
                .map(|(&e, &vol)| 4 * self.m * e - vol * vol)
                .sum();
            // Strict improvement keeps the lexicographically first argmax.
            if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                self.best = Some((value, self.rgs.clone()));
            }
            return;
        }
        let deg = self.adj[v].count_ones() as i128;
        for j in 0..self.blocks.len() {
            let gained = (self.adj[v] & self.blocks[j]).count_ones() as i128;
            self.blocks[j] |= 1 << v;
            self.internal[j] += gained;
            self.volume[j] += deg;
            self.rgs[v] = j;
            self.run(v + 1);
            self.blocks[j] &= !(1 << v);
            self.internal[j] -= gained;
            self.volume[j] -= deg;
        }
        if self.blocks.len() < self.max_parts {
            self.blocks.push(1 << v);
            self.internal.push(0);
            self.volume.push(deg);
            self.rgs[v] = self.blocks.len() - 1;
            self.run(v + 1);
            self.blocks.pop();
            self.internal.pop();
            self.volume.pop();
        }
    }
}

fn bounded<S: ScoreInt>(g: &Graph, c: usize, cap: usize) -> Result<Solution<S>> {
    let (adj, m) = checked(g, cap)?;
    let mut dfs = Dfs {
        adj: &adj,
        m,
        max_parts: c,
        blocks: Vec::new(),
        internal: Vec::new(),
        volume: Vec::new(),
        rgs: vec![0; g.n()],
        best: None,
    };
    dfs.run(0);
    let (best, rgs) = dfs.best.expect("at least one partition exists");
    Ok(finish(m, best, &rgs))
}

struct Restricted<'a> {
    adj: &'a [u64],
    m: i128,
    rgs: Vec<usize>,
    parts: usize,
    best: Option<(i128, Vec<usize>)>,
}

impl Restricted<'_> {
    fn part_value(&self, set: u64) -> i128 {
        let mut twice_internal = 0i128;
        let mut volume = 0i128;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            volume += self.adj[v].count_ones() as i128;
            twice_internal += (self.adj[v] & set).count_ones() as i128;
        }
        2 * self.m * twice_internal - volume * volume
    }

    fn run(&mut self, unassigned: u64, value: i128) {
        if unassigned == 0 {
            let better = match &self.best {
                None => true,
                Some((b, r)) => value > *b || (value == *b && self.rgs < *r),
            };
            if better {
                self.best = Some((value, self.rgs.clone()));
            }
            return;
        }
        let v = unassigned.trailing_zeros() as usize;
        if self.adj[v] == 0 {
            self.place(1 << v, unassigned, value);
            return;
        }
        let mut sets = Vec::new();
        grow(self.adj, 1 << v, unassigned & !(1 << v), 0, &mut sets);
        for set in sets {
            if set.count_ones() >= 2 {
                self.place(set, unassigned, value);
            }
        }
    }

    fn place(&mut self, set: u64, unassigned: u64, value: i128) {
        let id = self.parts;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.rgs[v] = id;
        }
        self.parts += 1;
        let gained = self.part_value(set);
        self.run(unassigned & !set, value + gained);
        self.parts -= 1;
    }
}

/// Connected supersets of `set` drawn from `allowed`, never using `excluded`.
fn grow(adj: &[u64], set: u64, allowed: u64, excluded: u64, out: &mut Vec<u64>) {
    let mut frontier = 0u64;
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        frontier |= adj[v];
    }
    frontier &= allowed & !excluded & !set;
    if frontier == 0 {
        out.push(set);
        return;
    }
    let w = frontier.trailing_zeros() as usize;
    grow(adj, set | 1 << w, allowed, excluded, out);
    grow(adj, set, allowed, excluded | 1 << w, out);
}

fn restricted<S: ScoreInt>(g: &Graph, cap: usize) -> Result<Solution<S>> {
    let (adj, m) = checked(g, cap)?;
    let n = g.n();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = Restricted {
        adj: &adj,
        m,
        rgs: vec![0; n],
        parts: 0,
        best: None,
    };
    search.run(all, 0);
    let (best, rgs) = search.best.expect("isolated-free graphs have a connected partition");
    Ok(finish(m, best, &rgs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::score::score_partition;

    fn k(n: usize) -> Graph {
        let e: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    fn c(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    fn two_k3() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=7).map(|n| iter_partitions(n, 12).unwrap().count()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203, 877]);
        assert!(iter_partitions(13, 12).is_err());
        assert!(iter_partitions(0, 12).is_err());
    }

    #[test]
    fn rgs_are_valid_and_sorted() {
        let all: Vec<_> = RgsIter::new(5).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for a in &all {
            assert_eq!(a[0], 0);
            for i in 1..a.len() {
                assert!(a[i] <= a[..i].iter().max().unwrap() + 1);
            }
        }
    }

    #[test]
    fn closed_forms() {
        for n in 3..=5 {
            for r in [Restriction::None, Restriction::ConnectedNoSingleton] {
                assert!(brute_force::<i64>(&k(n), r).unwrap().q.is_zero());
            }
        }
        let s = brute_force::<i64>(&two_k3(), Restriction::None).unwrap();
        assert_eq!(s.q.to_string(), "1/2");
        assert_eq!(s.partition.rgs(), vec![0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn c5_optimum() {
        let g = c(5);
        let s = brute_force::<i128>(&g, Restriction::None).unwrap();
        assert_eq!(s.q.to_string(), "2/25");
        let sizes: Vec<usize> = s.partition.parts().iter().map(|p| p.len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 5);
        assert!(sizes.contains(&3) && sizes.contains(&2));
        assert_eq!(score_partition::<i128>(&g, &s.partition).unwrap().q, s.q);
        let r = brute_force::<i128>(&g, Restriction::ConnectedNoSingleton).unwrap();
        assert_eq!(r.q, s.q);
        assert_eq!(r.partition, s.partition);
    }

    #[test]
    fn bounded_examples() {
        let g = two_k3();
        assert!(brute_force_bounded::<i64>(&g, 1).unwrap().q.is_zero());
        assert_eq!(brute_force_bounded::<i64>(&g, 2).unwrap().q.to_string(), "1/2");
        assert_eq!(brute_force_bounded::<i64>(&c(5), 5).unwrap().q.to_string(), "2/25");
        assert!(brute_force_bounded::<i64>(&g, 0).is_err());
    }

    #[test]
    fn isolated_vertices_stay_singletons() {
        let g = Graph::from_edges(4, &[(0, 1)]).unwrap();
        let s = brute_force::<i64>(&g, Restriction::ConnectedNoSingleton).unwrap();
        assert_eq!(s.partition.rgs(), vec![0, 0, 1, 2]);
        let u = brute_force::<i64>(&g, Restriction::None).unwrap();
        assert_eq!(u.q, s.q);
    }

    #[test]
    fn caps_and_edgeless() {
        assert!(matches!(
            brute_force::<i64>(&c(13), Restriction::None),
            Err(Error::CapExceeded { .. })
        ));
        assert!(brute_force::<i64>(&c(13), Restriction::ConnectedNoSingleton).is_ok());
        assert!(matches!(
            brute_force::<i64>(&Graph::from_edges(2, &[]).unwrap(), Restriction::None),
            Err(Error::Edgeless)
        ));
    }
}
