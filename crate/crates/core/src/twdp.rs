//! Dynamic programming over nice tree decompositions.
//!
//! Exact mode keys a state on the partition of the bag into liquid blocks and,
//! per block, the internal edge count `α` and volume `β` of the whole part
//! seen so far. A part is frozen when its last bag vertex is forgotten; the
//! table value is then the best total scaled value `Σ (4m·α − β²)` of the
//! frozen parts.
//!
//! Bounded mode (at most `c` parts) cannot freeze: a part without bag vertices
//! may still merge with a part from a sibling subtree. Such parts stay in the
//! state as *dormant* `(α, β)` pairs, kept as a sorted multiset because parts
//! are unlabelled. The table is then a feasibility set and the objective is
//! evaluated at the root.

use std::collections::HashMap;

use indexmap::map::Entry as MapEntry;
use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::scalar::{ScaledScore, ScoreInt};
use crate::score::Solution;
use crate::treedecomp::{self, Heuristic, NiceTreeDecomposition, NodeKind, TreeDecomposition};

pub const DEFAULT_STATE_CAP: usize = 50_000_000;

/// Bag partition plus per-block `α` and `β`. `blocks[i]` is the block of the
/// `i`-th bag vertex (bag sorted ascending), as a restricted growth string.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiquidState {
    pub blocks: Vec<u8>,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl LiquidState {
    /// Relabels blocks by first appearance, permuting `alpha` and `beta` to
    /// match. Blocks absent from `blocks` must have been removed already.
    fn canonical(mut blocks: Vec<u8>, alpha: Vec<u32>, beta: Vec<u32>) -> Self {
        let mut relabel = [u8::MAX; 256];
        let mut order = Vec::with_capacity(alpha.len());
        for b in blocks.iter_mut() {
            let old = *b as usize;
            if relabel[old] == u8::MAX {
                relabel[old] = order.len() as u8;
                order.push(old);
            }
            *b = relabel[old];
        }
        Self {
            blocks,
            alpha: order.iter().map(|&o| alpha[o]).collect(),
            beta: order.iter().map(|&o| beta[o]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Back {
    Leaf,
    One(usize),
    Two(usize, usize),
}

#[derive(Clone, Debug)]
struct Entry<S> {
    value: S,
    back: Back,
}

/// Signatures at one node: best frozen value per liquid state.
#[derive(Clone, Debug)]
pub struct SignatureTable<S> {
    bag: Vec<usize>,
    entries: IndexMap<LiquidState, Entry<S>>,
}

impl<S: ScoreInt> SignatureTable<S> {
    fn new(bag: Vec<usize>) -> Self {
        Self {
            bag,
            entries: IndexMap::new(),
        }
    }

    pub fn bag(&self) -> &[usize] {
        &self.bag
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Scaled frozen value of a state, `None` for unreachable states.
    pub fn get(&self, state: &LiquidState) -> Option<&S> {
        self.entries.get(state).map(|e| &e.value)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LiquidState, &S)> {
        self.entries.iter().map(|(k, e)| (k, &e.value))
    }

    fn offer(&mut self, state: LiquidState, value: S, back: Back, limit: usize) -> Result<()> {
        match self.entries.entry(state) {
            MapEntry::Occupied(mut o) => {
                if value > o.get().value {
                    *o.get_mut() = Entry { value, back };
                }
            }
            MapEntry::Vacant(v) => {
                v.insert(Entry { value, back });
            }
        }
        if self.entries.len() > limit {
            return Err(Error::StateBudget {
                states: self.entries.len(),
                cap: limit,
            });
        }
        Ok(())
    }
}

/// Scaled value `4m·α − β²` of one part.
fn part<S: ScoreInt>(four_m: &S, alpha: u32, beta: u32) -> S {
    four_m.clone() * S::from_u(alpha as u64) - S::from_u(beta as u64) * S::from_u(beta as u64)
}

/// Internal edges and volume of every block of `blocks` over `bag`.
fn block_stats(g: &Graph, bag: &[usize], blocks: &[u8], k: usize) -> (Vec<u32>, Vec<u32>) {
    let mut e = vec![0u32; k];
    let mut vol = vec![0u32; k];
    for (i, &u) in bag.iter().enumerate() {
        let b = blocks[i] as usize;
        vol[b] += g.degree(u) as u32;
        for (j, &w) in bag.iter().enumerate().skip(i + 1) {
            if blocks[j] as usize == b && g.has_edge(u, w) {
                e[b] += 1;
            }
        }
    }
    (e, vol)
}

/// Every partition of `bag` with `α = e(P)`, `β = vol(P)` and value 0.
pub fn dp_leaf<S: ScoreInt>(g: &Graph, bag: &[usize]) -> SignatureTable<S> {
    leaf(g, bag, usize::MAX).expect("unbounded")
}

fn leaf<S: ScoreInt>(g: &Graph, bag: &[usize], limit: usize) -> Result<SignatureTable<S>> {
    let mut table = SignatureTable::new(bag.to_vec());
    for rgs in crate::oracle::RgsIter::new(bag.len()) {
        let blocks: Vec<u8> = rgs.iter().map(|&b| b as u8).collect();
        let k = blocks.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
        let (alpha, beta) = block_stats(g, bag, &blocks, k);
        table.offer(LiquidState { blocks, alpha, beta }, S::zero(), Back::Leaf, limit)?;
    }
    Ok(table)
}

/// Table of the node that adds `v` to the child's bag.
pub fn dp_introduce<S: ScoreInt>(g: &Graph, v: usize, child: &SignatureTable<S>) -> SignatureTable<S> {
    introduce(g, v, child, usize::MAX).expect("unbounded")
}

fn introduce<S: ScoreInt>(
    g: &Graph,
    v: usize,
    child: &SignatureTable<S>,
    limit: usize,
) -> Result<SignatureTable<S>> {
    let mut bag = child.bag.clone();
    let p = bag.binary_search(&v).expect_err("introduced vertex already in bag");
    bag.insert(p, v);
    let dv = g.degree(v) as u32;
    let mut table = SignatureTable::new(bag);
    for (ci, (state, entry)) in child.entries.iter().enumerate() {
        let k = state.len();
        let mut nbrs = vec![0u32; k];
        for (q, &u) in child.bag.iter().enumerate() {
            if g.has_edge(u, v) {
                nbrs[state.blocks[q] as usize] += 1;
            }
        }
        for j in 0..=k {
            let mut blocks = state.blocks.clone();
            blocks.insert(p, j as u8);
            let (mut alpha, mut beta) = (state.alpha.clone(), state.beta.clone());
            if j < k {
                alpha[j] += nbrs[j];
                beta[j] += dv;
            } else {
                alpha.push(0);
                beta.push(dv);
            }
            let next = LiquidState::canonical(blocks, alpha, beta);
            table.offer(next, entry.value.clone(), Back::One(ci), limit)?;
        }
    }
    Ok(table)
}

/// Table of the node that removes `v` from the child's bag, freezing `v`'s
/// part when `v` was its last bag vertex.
pub fn dp_forget<S: ScoreInt>(g: &Graph, v: usize, child: &SignatureTable<S>) -> SignatureTable<S> {
    forget(g, v, child, usize::MAX).expect("unbounded")
}

fn forget<S: ScoreInt>(
    g: &Graph,
    v: usize,
    child: &SignatureTable<S>,
    limit: usize,
) -> Result<SignatureTable<S>> {
    let four_m = S::from_u(4 * g.m());
    let p = child.bag.binary_search(&v).expect("forgotten vertex not in bag");
    let mut bag = child.bag.clone();
    bag.remove(p);
    let mut table = SignatureTable::new(bag);
    for (ci, (state, entry)) in child.entries.iter().enumerate() {
        let j = state.blocks[p];
        let mut blocks = state.blocks.clone();
        blocks.remove(p);
        let (mut alpha, mut beta) = (state.alpha.clone(), state.beta.clone());
        let mut value = entry.value.clone();
        if !blocks.contains(&j) {
            value = value + part(&four_m, alpha[j as usize], beta[j as usize]);
            alpha.remove(j as usize);
            beta.remove(j as usize);
            for b in blocks.iter_mut() {
                if *b > j {
                    *b -= 1;
                }
            }
        }
        let next = LiquidState::canonical(blocks, alpha, beta);
        table.offer(next, value, Back::One(ci), limit)?;
    }
    Ok(table)
}

/// Combines two tables over the same bag; only equal bag partitions combine.
pub fn dp_join<S: ScoreInt>(
    g: &Graph,
    left: &SignatureTable<S>,
    right: &SignatureTable<S>,
) -> SignatureTable<S> {
    join(g, left, right, usize::MAX).expect("unbounded")
}

fn join<S: ScoreInt>(
    g: &Graph,
    left: &SignatureTable<S>,
    right: &SignatureTable<S>,
    limit: usize,
) -> Result<SignatureTable<S>> {
    assert_eq!(left.bag, right.bag, "join children must share a bag");
    let mut by_blocks: HashMap<&[u8], Vec<usize>> = HashMap::new();
    for (ri, state) in right.entries.keys().enumerate() {
        by_blocks.entry(&state.blocks).or_default().push(ri);
    }
    let mut table = SignatureTable::new(left.bag.clone());
    for (li, (ls, le)) in left.entries.iter().enumerate() {
        let Some(matches) = by_blocks.get(ls.blocks.as_slice()) else {
            continue;
        };
        let (e, vol) = block_stats(g, &left.bag, &ls.blocks, ls.len());
        for &ri in matches {
            let (rs, re) = right.entries.get_index(ri).unwrap();
            let state = LiquidState {
                blocks: ls.blocks.clone(),
                alpha: (0..ls.len()).map(|b| ls.alpha[b] + rs.alpha[b] - e[b]).collect(),
                beta: (0..ls.len()).map(|b| ls.beta[b] + rs.beta[b] - vol[b]).collect(),
            };
            table.offer(state, le.value.clone() + re.value.clone(), Back::Two(li, ri), limit)?;
        }
    }
    Ok(table)
}

/// Counters from one DP run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    pub nodes: usize,
    /// States stored over all tables.
    pub states: usize,
    pub largest_table: usize,
}

fn check_edges(g: &Graph) -> Result<()> {
    if g.m() == 0 {
        Err(Error::Edgeless)
    } else {
        Ok(())
    }
}

fn record(stats: &mut DpStats, len: usize, cap: usize) -> Result<usize> {
    stats.states += len;
    stats.largest_table = stats.largest_table.max(len);
    if stats.states > cap {
        return Err(Error::StateBudget {
            states: stats.states,
            cap,
        });
    }
    Ok(cap - stats.states)
}

fn budget_error(err: Error, stats: &DpStats, cap: usize) -> Error {
    match err {
        Error::StateBudget { states, .. } => Error::StateBudget {
            states: stats.states + states,
            cap,
        },
        other => other,
    }
}

/// Maximum modularity of `g` given a nice decomposition of it.
pub fn solve_exact<S: ScoreInt>(
    g: &Graph,
    nice: &NiceTreeDecomposition,
    state_cap: usize,
) -> Result<(Solution<S>, DpStats)> {
    check_edges(g)?;
    let mut stats = DpStats::default();
    let mut tables: Vec<SignatureTable<S>> = Vec::with_capacity(nice.len());
    let mut remaining = state_cap;
    for node in nice.nodes() {
        let table = match node.kind {
            NodeKind::Leaf => leaf(g, &node.bag, remaining),
            NodeKind::Introduce(v) => introduce(g, v, &tables[node.children[0]], remaining),
            NodeKind::Forget(v) => forget(g, v, &tables[node.children[0]], remaining),
            NodeKind::Join => join(g, &tables[node.children[0]], &tables[node.children[1]], remaining),
        }
        .map_err(|e| budget_error(e, &stats, state_cap))?;
        remaining = record(&mut stats, table.len(), state_cap)?;
        tables.push(table);
    }
    stats.nodes = nice.len();

    let four_m = S::from_u(4 * g.m());
    let root = nice.root();
    let mut best: Option<(usize, S)> = None;
    for (i, (state, entry)) in tables[root].entries.iter().enumerate() {
        let total = (0..state.len()).fold(entry.value.clone(), |acc, b| {
            acc + part(&four_m, state.alpha[b], state.beta[b])
        });
        if best.as_ref().is_none_or(|(_, b)| total > *b) {
            best = Some((i, total));
        }
    }
    let (root_state, value) = best.expect("root table is never empty");
    let partition = reconstruct(g, nice, &tables, root_state);
    Ok((
        Solution {
            q: ScaledScore::new(value, g.m()),
            partition,
        },
        stats,
    ))
}

fn reconstruct<S: ScoreInt>(
    g: &Graph,
    nice: &NiceTreeDecomposition,
    tables: &[SignatureTable<S>],
    root_state: usize,
) -> Partition {
    let mut assignment = vec![usize::MAX; g.n()];
    let mut next_id = 0;
    let root = nice.root();
    let root_len = tables[root].entries.get_index(root_state).unwrap().0.len();
    let globals: Vec<usize> = (0..root_len).collect();
    next_id += root_len;
    let mut stack = vec![(root, root_state, globals)];
    while let Some((t, si, globals)) = stack.pop() {
        let node = nice.node(t);
        let (state, entry) = tables[t].entries.get_index(si).unwrap();
        for (q, &u) in node.bag.iter().enumerate() {
            assignment[u] = globals[state.blocks[q] as usize];
        }
        match (node.kind, entry.back) {
            (NodeKind::Leaf, _) => {}
            (NodeKind::Introduce(v), Back::One(ci)) | (NodeKind::Forget(v), Back::One(ci)) => {
                let c = node.children[0];
                let child_state = tables[c].entries.get_index(ci).unwrap().0;
                let mut child_globals = vec![usize::MAX; child_state.len()];
                for (q, &u) in nice.node(c).bag.iter().enumerate() {
                    let cb = child_state.blocks[q] as usize;
                    if u == v {
                        continue;
                    }
                    let pq = node.bag.binary_search(&u).unwrap();
                    child_globals[cb] = globals[state.blocks[pq] as usize];
                }
                for slot in child_globals.iter_mut().filter(|s| **s == usize::MAX) {
                    *slot = next_id;
                    next_id += 1;
                }
                stack.push((c, ci, child_globals));
            }
            (NodeKind::Join, Back::Two(li, ri)) => {
                stack.push((node.children[0], li, globals.clone()));
                stack.push((node.children[1], ri, globals));
            }
            _ => unreachable!("back-pointer does not match node kind"),
        }
    }
    Partition::from_assignment(&assignment).canonical()
}

/// A dormant part: `(internal edges, volume)`.
type Dormant = (u32, u32);
/// Dormant-list positions a joined entry came from, left and right.
type Slots = (Option<u8>, Option<u8>);

/// A bounded-mode state: liquid blocks plus dormant parts sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundedState {
    pub liquid: LiquidState,
    pub dormant: Vec<(u32, u32)>,
}

impl BoundedState {
    pub fn parts(&self) -> usize {
        self.liquid.len() + self.dormant.len()
    }
}

#[derive(Clone, Debug)]
enum BoundedBack {
    Leaf,
    Introduce { child: usize, woke: Option<usize> },
    Forget { child: usize, slept: Option<usize> },
    /// `slots[k]` names the left and right dormant slots merged into slot `k`.
    Join { left: usize, right: usize, slots: Vec<(Option<u8>, Option<u8>)> },
}

struct BoundedTable {
    bag: Vec<usize>,
    entries: IndexMap<BoundedState, BoundedBack>,
}

impl BoundedTable {
    fn offer(&mut self, state: BoundedState, back: BoundedBack, limit: usize) -> Result<()> {
        if let MapEntry::Vacant(v) = self.entries.entry(state) {
            v.insert(back);
            if self.entries.len() > limit {
                return Err(Error::StateBudget {
                    states: self.entries.len(),
                    cap: limit,
                });
            }
        }
        Ok(())
    }
}

fn insert_sorted(dormant: &mut Vec<(u32, u32)>, part: (u32, u32)) -> usize {
    let at = dormant.partition_point(|&d| d > part);
    dormant.insert(at, part);
    at
}

struct Bounded<'a> {
    g: &'a Graph,
    c: usize,
}

impl Bounded<'_> {
    fn leaf(&self, bag: &[usize], limit: usize) -> Result<BoundedTable> {
        let mut table = BoundedTable {
            bag: bag.to_vec(),
            entries: IndexMap::new(),
        };
        for rgs in crate::oracle::RgsIter::new(bag.len()) {
            let blocks: Vec<u8> = rgs.iter().map(|&b| b as u8).collect();
            let k = blocks.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
            if k > self.c {
                continue;
            }
            let (alpha, beta) = block_stats(self.g, bag, &blocks, k);
            let state = BoundedState {
                liquid: LiquidState { blocks, alpha, beta },
                dormant: Vec::new(),
            };
            table.offer(state, BoundedBack::Leaf, limit)?;
        }
        Ok(table)
    }

    fn introduce(&self, v: usize, child: &BoundedTable, limit: usize) -> Result<BoundedTable> {
        let g = self.g;
        let mut bag = child.bag.clone();
        let p = bag.binary_search(&v).expect_err("introduced vertex already in bag");
        bag.insert(p, v);
        let dv = g.degree(v) as u32;
        let mut table = BoundedTable {
            bag,
            entries: IndexMap::new(),
        };
        for (ci, state) in child.entries.keys().enumerate() {
            let liquid = &state.liquid;
            let k = liquid.len();
            let mut nbrs = vec![0u32; k];
            for (q, &u) in child.bag.iter().enumerate() {
                if g.has_edge(u, v) {
                    nbrs[liquid.blocks[q] as usize] += 1;
                }
            }
            let mut emit = |alpha: Vec<u32>, beta: Vec<u32>, j: usize, dormant: Vec<(u32, u32)>, woke| {
                let mut blocks = liquid.blocks.clone();
                blocks.insert(p, j as u8);
                let next = BoundedState {
                    liquid: LiquidState::canonical(blocks, alpha, beta),
                    dormant,
                };
                table.offer(next, BoundedBack::Introduce { child: ci, woke }, limit)
            };
            for j in 0..k {
                let (mut alpha, mut beta) = (liquid.alpha.clone(), liquid.beta.clone());
                alpha[j] += nbrs[j];
                beta[j] += dv;
                emit(alpha, beta, j, state.dormant.clone(), None)?;
            }
            if state.parts() < self.c {
                let (mut alpha, mut beta) = (liquid.alpha.clone(), liquid.beta.clone());
                alpha.push(0);
                beta.push(dv);
                emit(alpha, beta, k, state.dormant.clone(), None)?;
            }
            for d in 0..state.dormant.len() {
                if d > 0 && state.dormant[d] == state.dormant[d - 1] {
                    continue;
                }
                let mut dormant = state.dormant.clone();
                let (a, b) = dormant.remove(d);
                let (mut alpha, mut beta) = (liquid.alpha.clone(), liquid.beta.clone());
                alpha.push(a);
                beta.push(b + dv);
                emit(alpha, beta, k, dormant, Some(d))?;
            }
        }
        Ok(table)
    }

    fn forget(&self, v: usize, child: &BoundedTable, limit: usize) -> Result<BoundedTable> {
        let p = child.bag.binary_search(&v).expect("forgotten vertex not in bag");
        let mut bag = child.bag.clone();
        bag.remove(p);
        let mut table = BoundedTable {
            bag,
            entries: IndexMap::new(),
        };
        for (ci, state) in child.entries.keys().enumerate() {
            let liquid = &state.liquid;
            let j = liquid.blocks[p];
            let mut blocks = liquid.blocks.clone();
            blocks.remove(p);
            let (mut alpha, mut beta) = (liquid.alpha.clone(), liquid.beta.clone());
            let mut dormant = state.dormant.clone();
            let mut slept = None;
            if !blocks.contains(&j) {
                let a = alpha.remove(j as usize);
                let b = beta.remove(j as usize);
                slept = Some(insert_sorted(&mut dormant, (a, b)));
                for x in blocks.iter_mut() {
                    if *x > j {
                        *x -= 1;
                    }
                }
            }
            let next = BoundedState {
                liquid: LiquidState::canonical(blocks, alpha, beta),
                dormant,
            };
            table.offer(next, BoundedBack::Forget { child: ci, slept }, limit)?;
        }
        Ok(table)
    }

    fn join(&self, left: &BoundedTable, right: &BoundedTable, limit: usize) -> Result<BoundedTable> {
        let g = self.g;
        let mut by_blocks: HashMap<&[u8], Vec<usize>> = HashMap::new();
        for (ri, state) in right.entries.keys().enumerate() {
            by_blocks.entry(&state.liquid.blocks).or_default().push(ri);
        }
        let mut table = BoundedTable {
            bag: left.bag.clone(),
            entries: IndexMap::new(),
        };
        for (li, ls) in left.entries.keys().enumerate() {
            let Some(matches) = by_blocks.get(ls.liquid.blocks.as_slice()) else {
                continue;
            };
            let k = ls.liquid.len();
            let (e, vol) = block_stats(g, &left.bag, &ls.liquid.blocks, k);
            for &ri in matches {
                let rs = right.entries.get_index(ri).unwrap().0;
                let (a, b) = (ls.dormant.len(), rs.dormant.len());
                // Parts after merging: k + a + b − matched ≤ c.
                let need = (k + a + b).saturating_sub(self.c);
                let liquid = LiquidState {
                    blocks: ls.liquid.blocks.clone(),
                    alpha: (0..k).map(|x| ls.liquid.alpha[x] + rs.liquid.alpha[x] - e[x]).collect(),
                    beta: (0..k).map(|x| ls.liquid.beta[x] + rs.liquid.beta[x] - vol[x]).collect(),
                };
                let mut pairing = vec![None; a];
                let mut used = vec![false; b];
                let mut result = Ok(());
                matchings(0, 0, need, &mut pairing, &mut used, &mut |pairing| {
                    if result.is_err() {
                        return;
                    }
                    let mut merged: Vec<(Dormant, Slots)> = Vec::new();
                    for (i, &pj) in pairing.iter().enumerate() {
                        let (la, lb) = ls.dormant[i];
                        match pj {
                            Some(j) => {
                                let (ra, rb) = rs.dormant[j];
                                merged.push(((la + ra, lb + rb), (Some(i as u8), Some(j as u8))));
                            }
                            None => merged.push(((la, lb), (Some(i as u8), None))),
                        }
                    }
                    for (j, &(ra, rb)) in rs.dormant.iter().enumerate() {
                        if !pairing.contains(&Some(j)) {
                            merged.push(((ra, rb), (None, Some(j as u8))));
                        }
                    }
                    merged.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
                    let state = BoundedState {
                        liquid: liquid.clone(),
                        dormant: merged.iter().map(|m| m.0).collect(),
                    };
                    let back = BoundedBack::Join {
                        left: li,
                        right: ri,
                        slots: merged.iter().map(|m| m.1).collect(),
                    };
                    result = table.offer(state, back, limit);
                });
                result?;
            }
        }
        Ok(table)
    }
}

/// Calls `f` with every partial injective map from `0..pairing.len()` into
/// the right side that pairs at least `need` elements.
fn matchings(
    i: usize,
    paired: usize,
    need: usize,
    pairing: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    f: &mut dyn FnMut(&[Option<usize>]),
) {
    if paired + (pairing.len() - i) < need {
        return;
    }
    if i == pairing.len() {
        f(pairing);
        return;
    }
    pairing[i] = None;
    matchings(i + 1, paired, need, pairing, used, f);
    for j in 0..used.len() {
        if !used[j] {
            used[j] = true;
            pairing[i] = Some(j);
            matchings(i + 1, paired + 1, need, pairing, used, f);
            used[j] = false;
        }
    }
    pairing[i] = None;
}

/// Maximum modularity over partitions with at most `c` parts.
pub fn solve_bounded<S: ScoreInt>(
    g: &Graph,
    nice: &NiceTreeDecomposition,
    c: usize,
    state_cap: usize,
) -> Result<(Solution<S>, DpStats)> {
    check_edges(g)?;
    if c == 0 {
        return Err(Error::InvalidArgument("part bound must be at least 1".into()));
    }
    let c = c.min(g.n().max(1));
    if c > u8::MAX as usize {
        return Err(Error::InvalidArgument("part bound above 255".into()));
    }
    let dp = Bounded { g, c };
    let mut stats = DpStats::default();
    let mut tables: Vec<BoundedTable> = Vec::with_capacity(nice.len());
    let mut remaining = state_cap;
    for node in nice.nodes() {
        let table = match node.kind {
            NodeKind::Leaf => dp.leaf(&node.bag, remaining),
            NodeKind::Introduce(v) => dp.introduce(v, &tables[node.children[0]], remaining),
            NodeKind::Forget(v) => dp.forget(v, &tables[node.children[0]], remaining),
            NodeKind::Join => dp.join(&tables[node.children[0]], &tables[node.children[1]], remaining),
        }
        .map_err(|e| budget_error(e, &stats, state_cap))?;
        remaining = record(&mut stats, table.entries.len(), state_cap)?;
        tables.push(table);
    }
    stats.nodes = nice.len();

    let four_m = S::from_u(4 * g.m());
    let root = nice.root();
    let mut best: Option<(usize, S)> = None;
    for (i, state) in tables[root].entries.keys().enumerate() {
        let liquid = &state.liquid;
        let blocks = (0..liquid.len()).map(|b| part(&four_m, liquid.alpha[b], liquid.beta[b]));
        let dormant = state.dormant.iter().map(|&(a, b)| part(&four_m, a, b));
        let total = blocks.chain(dormant).fold(S::zero(), |acc, x| acc + x);
        if best.as_ref().is_none_or(|(_, b)| total > *b) {
            best = Some((i, total));
        }
    }
    let (root_state, value) = best.expect("root table is never empty");
    let partition = reconstruct_bounded(g, nice, &tables, root_state);
    Ok((
        Solution {
            q: ScaledScore::new(value, g.m()),
            partition,
        },
        stats,
    ))
}

fn reconstruct_bounded(
    g: &Graph,
    nice: &NiceTreeDecomposition,
    tables: &[BoundedTable],
    root_state: usize,
) -> Partition {
    let mut assignment = vec![usize::MAX; g.n()];
    let root = nice.root();
    let rs = tables[root].entries.get_index(root_state).unwrap().0;
    let blocks: Vec<usize> = (0..rs.liquid.len()).collect();
    let dormant: Vec<usize> = (blocks.len()..rs.parts()).collect();
    let mut stack = vec![(root, root_state, blocks, dormant)];
    while let Some((t, si, blocks, dormant)) = stack.pop() {
        let node = nice.node(t);
        let (state, back) = tables[t].entries.get_index(si).unwrap();
        for (q, &u) in node.bag.iter().enumerate() {
            assignment[u] = blocks[state.liquid.blocks[q] as usize];
        }
        let child_blocks = |c: usize, cs: &BoundedState, skip: usize| {
            let mut out = vec![usize::MAX; cs.liquid.len()];
            for (q, &u) in nice.node(c).bag.iter().enumerate() {
                if u != skip {
                    let pq = node.bag.binary_search(&u).unwrap();
                    out[cs.liquid.blocks[q] as usize] = blocks[state.liquid.blocks[pq] as usize];
                }
            }
            out
        };
        match (node.kind, back) {
            (NodeKind::Leaf, _) => {}
            (NodeKind::Introduce(v), BoundedBack::Introduce { child, woke }) => {
                let c = node.children[0];
                let cs = tables[c].entries.get_index(*child).unwrap().0;
                let cb = child_blocks(c, cs, v);
                let mut cd = Vec::with_capacity(cs.dormant.len());
                for j in 0..cs.dormant.len() {
                    cd.push(match *woke {
                        Some(w) if j == w => {
                            let p = node.bag.binary_search(&v).unwrap();
                            blocks[state.liquid.blocks[p] as usize]
                        }
                        Some(w) if j > w => dormant[j - 1],
                        _ => dormant[j],
                    });
                }
                stack.push((c, *child, cb, cd));
            }
            (NodeKind::Forget(v), BoundedBack::Forget { child, slept }) => {
                let c = node.children[0];
                let cs = tables[c].entries.get_index(*child).unwrap().0;
                let mut cb = child_blocks(c, cs, v);
                let mut cd = dormant.clone();
                if let Some(at) = *slept {
                    let slot = cd.remove(at);
                    let vq = nice.node(c).bag.binary_search(&v).unwrap();
                    cb[cs.liquid.blocks[vq] as usize] = slot;
                }
                stack.push((c, *child, cb, cd));
            }
            (NodeKind::Join, BoundedBack::Join { left, right, slots }) => {
                let (lc, rc) = (node.children[0], node.children[1]);
                let la = tables[lc].entries.get_index(*left).unwrap().0.dormant.len();
                let rb = tables[rc].entries.get_index(*right).unwrap().0.dormant.len();
                let mut ld = vec![usize::MAX; la];
                let mut rd = vec![usize::MAX; rb];
                for (k, &(l, r)) in slots.iter().enumerate() {
                    if let Some(l) = l {
                        ld[l as usize] = dormant[k];
                    }
                    if let Some(r) = r {
                        rd[r as usize] = dormant[k];
                    }
                }
                stack.push((lc, *left, blocks.clone(), ld));
                stack.push((rc, *right, blocks, rd));
            }
            _ => unreachable!("back-pointer does not match node kind"),
        }
    }
    Partition::from_assignment(&assignment).canonical()
}

/// Number of parts used for a target error `ε`: `⌈1/ε⌉`.
pub fn parts_for_epsilon(epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok((1.0 / epsilon - 1e-9).ceil() as usize)
}

/// A partition with modularity at least `(1 − ε)·q*`, via the bounded DP with
/// `⌈1/ε⌉` parts.
pub fn approximate<S: ScoreInt>(
    g: &Graph,
    nice: &NiceTreeDecomposition,
    epsilon: f64,
    state_cap: usize,
) -> Result<(Solution<S>, DpStats)> {
    let c = parts_for_epsilon(epsilon)?;
    solve_bounded(g, nice, c, state_cap)
}

/// What to run on a whole graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Exact,
    Bounded(usize),
    Approximate(f64),
}

/// Result of [`solve_graph`].
#[derive(Clone, Debug)]
pub struct TwOutcome<S: ScoreInt> {
    pub solution: Solution<S>,
    pub stats: DpStats,
    /// Width of the decomposition the DP ran on.
    pub width: usize,
}

/// Runs the DP on `g` after removing isolated vertices. Exact mode returns
/// them as singleton parts; bounded modes add them to the first part so the
/// part count stays within the bound.
///
/// `td`, if given, must be a valid decomposition of `g`; otherwise one is
/// built with `heuristic`.
pub fn solve_graph<S: ScoreInt>(
    g: &Graph,
    td: Option<&TreeDecomposition>,
    heuristic: Heuristic,
    mode: Mode,
    state_cap: usize,
) -> Result<TwOutcome<S>> {
    check_edges(g)?;
    let stripped = g.strip_isolated();
    let h = &stripped.graph;
    let td = match td {
        Some(td) => {
            treedecomp::check(g, td)?;
            let mut new_index = vec![None; g.n()];
            for (i, &v) in stripped.original.iter().enumerate() {
                new_index[v] = Some(i);
            }
            td.restricted(&new_index)
        }
        None => treedecomp::decompose(h, heuristic),
    };
    let nice = treedecomp::make_nice(h, &td)?;
    let (solution, stats) = match mode {
        Mode::Exact => solve_exact(h, &nice, state_cap)?,
        Mode::Bounded(c) => solve_bounded(h, &nice, c, state_cap)?,
        Mode::Approximate(eps) => approximate(h, &nice, eps, state_cap)?,
    };
    Ok(TwOutcome {
        solution: Solution {
            q: solution.q,
            partition: match mode {
                Mode::Exact => solution.partition.lift(&stripped),
                _ => solution.partition.lift_into_first(&stripped),
            },
        },
        stats,
        width: nice.width(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force, brute_force_bounded, Restriction};
    use crate::score::score_partition;
    use crate::treedecomp::{heuristic_decompose, make_nice};
    use crate::vertex_set::VertexSet;

    fn k2() -> Graph {
        Graph::from_edges(2, &[(0, 1)]).unwrap()
    }

    fn two_k3() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    fn c5() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    fn state(blocks: &[u8], alpha: &[u32], beta: &[u32]) -> LiquidState {
        LiquidState {
            blocks: blocks.to_vec(),
            alpha: alpha.to_vec(),
            beta: beta.to_vec(),
        }
    }

    #[test]
    fn leaf_tables() {
        let t: SignatureTable<i64> = dp_leaf(&k2(), &[0]);
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(&state(&[0], &[0], &[1])), Some(&0));

        let t: SignatureTable<i64> = dp_leaf(&k2(), &[0, 1]);
        assert_eq!(t.len(), 2);
        assert_eq!(t.get(&state(&[0, 0], &[1], &[2])), Some(&0));
        assert_eq!(t.get(&state(&[0, 1], &[0, 0], &[1, 1])), Some(&0));
    }

    #[test]
    fn k2_pipeline() {
        let g = k2();
        let leaf: SignatureTable<i64> = dp_leaf(&g, &[0]);
        let intro = dp_introduce(&g, 1, &leaf);
        assert_eq!(intro.get(&state(&[0, 0], &[1], &[2])), Some(&0));
        assert_eq!(intro.get(&state(&[0, 1], &[0, 0], &[1, 1])), Some(&0));

        let forgot = dp_forget(&g, 0, &intro);
        // Freezing {u} at m = 1: 4·1·0 − 1² = −1, i.e. −1/4.
        assert_eq!(forgot.get(&state(&[0], &[0], &[1])), Some(&-1));
        assert_eq!(forgot.get(&state(&[0], &[1], &[2])), Some(&0));
    }

    #[test]
    fn introduce_isolated_in_subtree() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let leaf: SignatureTable<i64> = dp_leaf(&g, &[0]);
        let intro = dp_introduce(&g, 2, &leaf);
        assert_eq!(intro.get(&state(&[0, 0], &[0], &[2])), Some(&0));
        assert_eq!(intro.get(&state(&[0, 1], &[0, 0], &[1, 1])), Some(&0));
    }

    #[test]
    fn join_cancels_double_count() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let t: SignatureTable<i64> = dp_leaf(&g, &[0, 1]);
        let j = dp_join(&g, &t, &t);
        assert_eq!(j.len(), t.len());
        for (s, v) in t.iter() {
            assert_eq!(j.get(s), Some(v));
        }
    }

    #[test]
    fn join_adds_extra_volume() {
        // Path 2-0-1-3: bag {0, 1}; the left child has seen 2, the right child 3.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 3)]).unwrap();
        let left = dp_forget(&g, 2, &dp_introduce(&g, 0, &dp_introduce(&g, 1, &dp_leaf::<i64>(&g, &[2]))));
        let right = dp_forget(&g, 3, &dp_introduce(&g, 0, &dp_introduce(&g, 1, &dp_leaf::<i64>(&g, &[3]))));
        let j = dp_join(&g, &left, &right);
        // All four vertices in one part: α = 3, β = 6.
        assert_eq!(j.get(&state(&[0, 0], &[3], &[6])), Some(&0));
    }

    #[test]
    fn join_needs_equal_partitions() {
        let g = k2();
        let mut left: SignatureTable<i64> = dp_leaf(&g, &[0, 1]);
        let mut right = left.clone();
        left.entries.retain(|s, _| s.len() == 1);
        right.entries.retain(|s, _| s.len() == 2);
        assert!(dp_join(&g, &left, &right).is_empty());
    }

    fn nice(g: &Graph) -> NiceTreeDecomposition {
        make_nice(g, &heuristic_decompose(g)).unwrap()
    }

    #[test]
    fn exact_examples() {
        let g = k2();
        let (s, _) = solve_exact::<i64>(&g, &nice(&g), DEFAULT_STATE_CAP).unwrap();
        assert!(s.q.is_zero());
        assert_eq!(s.partition.len(), 1);

        let g = two_k3();
        let (s, _) = solve_exact::<i128>(&g, &nice(&g), DEFAULT_STATE_CAP).unwrap();
        assert_eq!(s.q.to_string(), "1/2");

        let g = c5();
        let (s, _) = solve_exact::<i128>(&g, &nice(&g), DEFAULT_STATE_CAP).unwrap();
        assert_eq!(s.q.to_string(), "2/25");
        assert_eq!(score_partition::<i128>(&g, &s.partition).unwrap().q, s.q);
    }

    #[test]
    fn bounded_examples() {
        let g = two_k3();
        let n = nice(&g);
        assert!(solve_bounded::<i64>(&g, &n, 1, DEFAULT_STATE_CAP).unwrap().0.q.is_zero());
        let (s, _) = solve_bounded::<i64>(&g, &n, 2, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(s.q.to_string(), "1/2");
        assert_eq!(score_partition::<i64>(&g, &s.partition).unwrap().q, s.q);
        let g = c5();
        let (s, _) = solve_bounded::<i64>(&g, &nice(&g), 2, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(s.q.to_string(), "2/25");
    }

    #[test]
    fn bounded_merges_parts_across_subtrees() {
        // Three disjoint triangles with two parts: one part must hold two of
        // them, so dormant parts from different subtrees have to merge.
        let mut e = Vec::new();
        for t in 0..3 {
            let b = 3 * t;
            e.extend([(b, b + 1), (b + 1, b + 2), (b, b + 2)]);
        }
        let g = Graph::from_edges(9, &e).unwrap();
        let n = nice(&g);
        for c in 1..=4 {
            let (s, _) = solve_bounded::<i64>(&g, &n, c, DEFAULT_STATE_CAP).unwrap();
            let o = brute_force_bounded::<i64>(&g, c).unwrap();
            assert_eq!(s.q, o.q, "c = {c}");
            assert!(s.partition.len() <= c);
            assert_eq!(score_partition::<i64>(&g, &s.partition).unwrap().q, s.q);
        }
    }

    #[test]
    fn approximate_examples() {
        let g = two_k3();
        let n = nice(&g);
        assert_eq!(approximate::<i64>(&g, &n, 0.5, DEFAULT_STATE_CAP).unwrap().0.q.to_string(), "1/2");
        assert_eq!(approximate::<i64>(&g, &n, 0.6, DEFAULT_STATE_CAP).unwrap().0.q.to_string(), "1/2");
        let g = c5();
        assert_eq!(approximate::<i64>(&g, &nice(&g), 0.1, DEFAULT_STATE_CAP).unwrap().0.q.to_string(), "2/25");
        assert_eq!(parts_for_epsilon(0.1).unwrap(), 10);
        assert_eq!(parts_for_epsilon(0.25).unwrap(), 4);
        assert_eq!(parts_for_epsilon(0.3).unwrap(), 4);
        assert!(parts_for_epsilon(1.0).is_err());
        assert!(parts_for_epsilon(0.0).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let g = c5();
        assert!(matches!(
            solve_exact::<i64>(&g, &nice(&g), 5),
            Err(Error::StateBudget { cap: 5, .. })
        ));
    }

    #[test]
    fn stored_states_dominate_bag_statistics() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap();
        let n = nice(&g);
        let mut tables: Vec<SignatureTable<i64>> = Vec::new();
        for node in n.nodes() {
            let t = match node.kind {
                NodeKind::Leaf => dp_leaf(&g, &node.bag),
                NodeKind::Introduce(v) => dp_introduce(&g, v, &tables[node.children[0]]),
                NodeKind::Forget(v) => dp_forget(&g, v, &tables[node.children[0]]),
                NodeKind::Join => dp_join(&g, &tables[node.children[0]], &tables[node.children[1]]),
            };
            for (s, _) in t.iter() {
                for b in 0..s.len() {
                    let members: VertexSet = node
                        .bag
                        .iter()
                        .enumerate()
                        .filter(|&(q, _)| s.blocks[q] as usize == b)
                        .map(|(_, &u)| u)
                        .collect();
                    let st = g.set_stats(&members);
                    assert!(s.alpha[b] as u64 >= st.internal);
                    assert!(s.beta[b] as u64 >= st.volume);
                }
            }
            tables.push(t);
        }
    }

    #[test]
    fn graph_level_wrapper_lifts_isolated_vertices() {
        let g = two_k3().with_isolated(3);
        let out = solve_graph::<i128>(&g, None, Heuristic::MinFill, Mode::Exact, DEFAULT_STATE_CAP)
            .unwrap();
        assert_eq!(out.solution.q.to_string(), "1/2");
        assert_eq!(out.solution.partition.len(), 5);
        let o = brute_force::<i128>(&g, Restriction::None).unwrap();
        assert_eq!(o.q, out.solution.q);
    }
}
