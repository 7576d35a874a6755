//! Exact solver driven by the connected induced subgraphs of the input.
//!
//! Every part of an optimal partition can be taken connected, and a connected
//! set split into several connected parts always has a part whose removal
//! leaves the rest connected (a leaf of a spanning tree of the quotient graph).
//! So the best value over a connected set `S` is either `S` as one part or the
//! best of two connected halves, and both halves are again connected induced
//! subgraphs. Work is roughly `h · min(h, 2^|S|)` for `h` subgraphs.
//!
//! Vertex sets are `u64` masks, so graphs are limited to 64 vertices.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::scalar::{ScaledScore, ScoreInt};
use crate::score::Solution;

pub const DEFAULT_SUBGRAPH_CAP: usize = 2_000_000;
pub const MAX_VERTICES: usize = 64;

fn masks(g: &Graph) -> Result<Vec<u64>> {
    g.adjacency_masks().ok_or(Error::CapExceeded {
        what: "vertices",
        size: g.n(),
        cap: MAX_VERTICES,
    })
}

/// Emits every connected set `S ⊇ u` with `S ∩ x = ∅`, each once.
fn grow(adj: &[u64], u: u64, x: u64, out: &mut Vec<u64>, cap: usize) -> bool {
    let mut frontier = 0;
    let mut rest = u;
    while rest != 0 {
        frontier |= adj[rest.trailing_zeros() as usize];
        rest &= rest - 1;
    }
    let cand = frontier & !u & !x;
    if cand == 0 {
        out.push(u);
        return out.len() <= cap;
    }
    let w = cand & cand.wrapping_neg();
    grow(adj, u | w, x, out, cap) && grow(adj, u, x | w, out, cap)
}

/// All connected induced subgraphs as vertex masks, by size then mask.
pub fn connected_subgraphs(g: &Graph, cap: usize) -> Result<Vec<u64>> {
    let adj = masks(g)?;
    let mut out = Vec::new();
    for v in 0..g.n() {
        let earlier = (1u64 << v) - 1;
        if !grow(&adj, 1 << v, earlier, &mut out, cap) {
            return Err(Error::SubgraphBudget {
                found: out.len(),
                cap,
            });
        }
    }
    out.sort_unstable_by_key(|&s| (s.count_ones(), s));
    Ok(out)
}

/// Number of connected induced subgraphs, or a budget error above `cap`.
pub fn count_connected_subgraphs(g: &Graph, cap: usize) -> Result<usize> {
    connected_subgraphs(g, cap).map(|s| s.len())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConnsubStats {
    pub subgraphs: usize,
    /// Candidate splits examined.
    pub splits: u64,
}

/// Maximum modularity. Ties keep the coarser decomposition.
pub fn solve<S: ScoreInt>(g: &Graph, cap: usize) -> Result<(Solution<S>, ConnsubStats)> {
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    let adj = masks(g)?;
    let subs = connected_subgraphs(g, cap)?;
    let index: HashMap<u64, u32> = subs.iter().enumerate().map(|(i, &s)| (s, i as u32)).collect();
    let four_m = 4 * g.m() as i64;
    let degree: Vec<i64> = (0..g.n()).map(|v| g.degree(v) as i64).collect();

    let mut best = vec![0i64; subs.len()];
    // Index of the half holding the lowest vertex, or u32::MAX for one part.
    let mut split = vec![u32::MAX; subs.len()];
    let mut first_of_size = vec![0usize; g.n() + 2];
    let mut stats = ConnsubStats {
        subgraphs: subs.len(),
        splits: 0,
    };
    for (i, &s) in subs.iter().enumerate() {
        let size = s.count_ones() as usize;
        if i == 0 || subs[i - 1].count_ones() as usize != size {
            first_of_size[size] = i;
        }
        let (mut twice_e, mut vol) = (0i64, 0i64);
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            twice_e += (adj[v] & s).count_ones() as i64;
            vol += degree[v];
            rest &= rest - 1;
        }
        best[i] = four_m * (twice_e / 2) - vol * vol;
        if size < 2 {
            continue;
        }
        let low = s & s.wrapping_neg();
        let mut consider = |a: u64, stats: &mut ConnsubStats| {
            stats.splits += 1;
            if let (Some(&ia), Some(&ib)) = (index.get(&a), index.get(&(s ^ a))) {
                let v = best[ia as usize] + best[ib as usize];
                if v > best[i] {
                    best[i] = v;
                    split[i] = ia;
                }
            }
        };
        let smaller = first_of_size[size];
        if size - 1 < 63 && (1u64 << (size - 1)) <= smaller as u64 {
            let others = s ^ low;
            let mut sub = (others - 1) & others;
            loop {
                consider(low | sub, &mut stats);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & others;
            }
        } else {
            for &a in &subs[..smaller] {
                if a & low != 0 && a & !s == 0 {
                    consider(a, &mut stats);
                }
            }
        }
    }

    let mut total = 0i64;
    let mut stack = Vec::new();
    let mut assignment = vec![usize::MAX; g.n()];
    let mut next_part = 0;
    for comp in g.connected_components() {
        let mask = comp.iter().fold(0u64, |m, v| m | 1 << v);
        let id = index[&mask] as usize;
        total += best[id];
        stack.push(id);
    }
    while let Some(id) = stack.pop() {
        if split[id] == u32::MAX {
            let mut rest = subs[id];
            while rest != 0 {
                assignment[rest.trailing_zeros() as usize] = next_part;
                rest &= rest - 1;
            }
            next_part += 1;
        } else {
            let a = split[id] as usize;
            stack.push(a);
            stack.push(index[&(subs[id] ^ subs[a])] as usize);
        }
    }
    let num = S::from_big(&BigInt::from(total)).expect("64-vertex scores fit every score type");
    let q = ScaledScore::new(num, g.m());
    let partition = Partition::from_assignment(&assignment).canonical();
    Ok((Solution { q, partition }, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::score::score_partition;

    fn count(n: usize, e: &[(usize, usize)]) -> usize {
        count_connected_subgraphs(&Graph::from_edges(n, e).unwrap(), usize::MAX).unwrap()
    }

    #[test]
    fn subgraph_counts() {
        assert_eq!(count(3, &[(0, 1), (1, 2)]), 6);
        assert_eq!(count(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), 15);
        assert_eq!(count(3, &[(1, 2)]), 4);
        // Paths have n(n+1)/2 connected subgraphs, cycles n(n−1)+1.
        let path: Vec<_> = (0..9).map(|i| (i, i + 1)).collect();
        assert_eq!(count(10, &path), 55);
        let cycle: Vec<_> = (0..10).map(|i| (i, (i + 1) % 10)).collect();
        assert_eq!(count(10, &cycle), 91);
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 2)]).unwrap();
        let subs = connected_subgraphs(&g, usize::MAX).unwrap();
        let mut dedup = subs.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), subs.len());
        let adj = g.adjacency_masks().unwrap();
        let brute = (1u64..1 << 6)
            .filter(|&s| {
                let mut seen = s & s.wrapping_neg();
                loop {
                    let mut next = seen;
                    for (v, &row) in adj.iter().enumerate() {
                        if seen >> v & 1 == 1 {
                            next |= row & s;
                        }
                    }
                    if next == seen {
                        return seen == s;
                    }
                    seen = next;
                }
            })
            .count();
        assert_eq!(brute, subs.len());
    }

    #[test]
    fn budget() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(
            connected_subgraphs(&g, 14),
            Err(Error::SubgraphBudget { cap: 14, .. })
        ));
        assert!(connected_subgraphs(&g, 15).is_ok());
    }

    fn q(n: usize, e: &[(usize, usize)]) -> String {
        let g = Graph::from_edges(n, e).unwrap();
        let (s, _) = solve::<i128>(&g, usize::MAX).unwrap();
        assert_eq!(score_partition::<i128>(&g, &s.partition).unwrap().q, s.q);
        s.q.to_string()
    }

    #[test]
    fn examples() {
        assert_eq!(q(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]), "1/2");
        let k5: Vec<_> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
        assert_eq!(q(5, &k5), "0");
        assert_eq!(q(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]), "2/25");
        assert_eq!(q(2, &[(0, 1)]), "0");
    }

    #[test]
    fn isolated_vertices_are_singletons() {
        let g = Graph::from_edges(8, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let (s, _) = solve::<i64>(&g, usize::MAX).unwrap();
        assert_eq!(s.q.to_string(), "1/2");
        assert_eq!(s.partition.len(), 4);
    }

    #[test]
    fn rejects_large_and_edgeless() {
        let big = Graph::from_edges(65, &[(0, 1)]).unwrap();
        assert!(matches!(solve::<i64>(&big, 10), Err(Error::CapExceeded { .. })));
        let empty = Graph::from_edges(3, &[]).unwrap();
        assert!(matches!(solve::<i64>(&empty, 10), Err(Error::Edgeless)));
    }
}
