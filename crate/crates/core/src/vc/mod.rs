//! Exact solver parameterised by the size `k` of a minimum vertex cover `U`.
//!
//! Vertices outside `U` form an independent set `W` and are grouped by their
//! neighbourhood in `U` (their *type*, a `k`-bit mask). Fix a partition
//! `{P_1, …, P_ℓ}` of `U`. When every part meets `U`, a partition of `V` is
//! determined up to score by the counts `x[σ][i]` of type-`σ` vertices placed
//! with `P_i`, and
//!
//! ```text
//! e(A_i)   = e(P_i)   + Σ_σ x[σ][i]·|σ ∧ π_i|
//! vol(A_i) = vol(P_i) + Σ_σ x[σ][i]·|σ|
//! ```
//!
//! The solver enumerates all partitions of `U` and maximises over `x` by
//! branch and bound.

mod cover;
mod iqp;

use std::fmt;

use num_bigint::BigInt;

pub use cover::{is_cover, min_vertex_cover, vertex_cover_at_most};
pub use iqp::{iqp_instance, yz_optimize, Iqp, YzReport};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::RgsIter;
use crate::partition::Partition;
use crate::scalar::{ScaledScore, ScoreInt};
use crate::score::Solution;
use crate::vertex_set::VertexSet;

/// Largest cover whose partitions are enumerated by default (Bell(10) = 115975).
pub const DEFAULT_COVER_CAP: usize = 10;
pub const DEFAULT_NODE_CAP: u64 = 500_000_000;

/// A graph seen through a vertex cover: cover adjacency plus type counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverInstance {
    m: u64,
    cover: Vec<usize>,
    /// Neighbours of each cover vertex inside the cover, as masks.
    cover_adj: Vec<u32>,
    cover_degree: Vec<u64>,
    /// `(w, τ(w))` for every vertex outside the cover, ascending by `w`.
    typed: Vec<(usize, u32)>,
    /// Distinct types present, ascending, with their counts.
    counts: Vec<(u32, u64)>,
}

impl CoverInstance {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn k(&self) -> usize {
        self.cover.len()
    }

    /// Cover vertices; bit `j` of a type refers to `cover()[j]`.
    pub fn cover(&self) -> &[usize] {
        &self.cover
    }

    pub fn typed(&self) -> &[(usize, u32)] {
        &self.typed
    }

    pub fn counts(&self) -> &[(u32, u64)] {
        &self.counts
    }

    /// Number of outside vertices of type `sigma`.
    pub fn count(&self, sigma: u32) -> u64 {
        self.counts
            .binary_search_by_key(&sigma, |&(s, _)| s)
            .map_or(0, |i| self.counts[i].1)
    }

    /// Type as a bit string, `u_1` first.
    pub fn type_string(&self, sigma: u32) -> String {
        (0..self.k()).map(|j| if sigma >> j & 1 == 1 { '1' } else { '0' }).collect()
    }
}

/// Types the vertices outside `cover`.
pub fn classify_types(g: &Graph, cover: &VertexSet) -> Result<CoverInstance> {
    if let Some(&(u, v)) = g
        .edges()
        .iter()
        .find(|&&(u, v)| !cover.contains(u) && !cover.contains(v))
    {
        return Err(Error::NotACover(u, v));
    }
    let list = cover.to_vec();
    if list.len() > 32 {
        return Err(Error::CapExceeded {
            what: "vertex cover",
            size: list.len(),
            cap: 32,
        });
    }
    let bit = |v: usize| list.binary_search(&v).ok().map(|j| 1u32 << j);
    let mask_of = |v: usize| g.neighbors(v).iter().filter_map(|&u| bit(u)).fold(0, |a, b| a | b);
    let typed: Vec<(usize, u32)> = (0..g.n())
        .filter(|&w| !cover.contains(w))
        .map(|w| (w, mask_of(w)))
        .collect();
    let mut counts: Vec<(u32, u64)> = Vec::new();
    let mut sorted: Vec<u32> = typed.iter().map(|&(_, s)| s).collect();
    sorted.sort_unstable();
    for s in sorted {
        match counts.last_mut() {
            Some((t, c)) if *t == s => *c += 1,
            _ => counts.push((s, 1)),
        }
    }
    Ok(CoverInstance {
        m: g.m(),
        cover_adj: list.iter().map(|&u| mask_of(u)).collect(),
        cover_degree: list.iter().map(|&u| g.degree(u)).collect(),
        cover: list,
        typed,
        counts,
    })
}

/// A partition of the cover into non-empty parts, as masks over cover bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPartition {
    parts: Vec<u32>,
    internal: Vec<u64>,
    volume: Vec<u64>,
}

impl CoverPartition {
    pub fn new(inst: &CoverInstance, parts: Vec<u32>) -> Result<Self> {
        let full = if inst.k() == 32 { u32::MAX } else { (1u32 << inst.k()) - 1 };
        let mut seen = 0u32;
        for &p in &parts {
            if p == 0 || p & !full != 0 || p & seen != 0 {
                return Err(Error::InvalidPartition(
                    "cover parts must be non-empty, disjoint and inside the cover".into(),
                ));
            }
            seen |= p;
        }
        if seen != full {
            return Err(Error::InvalidPartition("cover parts must cover the cover".into()));
        }
        let internal = parts
            .iter()
            .map(|&p| {
                let twice: u32 = bits(p).map(|j| (inst.cover_adj[j] & p).count_ones()).sum();
                u64::from(twice / 2)
            })
            .collect();
        let volume = parts
            .iter()
            .map(|&p| bits(p).map(|j| inst.cover_degree[j]).sum())
            .collect();
        Ok(Self {
            parts,
            internal,
            volume,
        })
    }

    /// From a restricted growth string over cover positions.
    pub fn from_rgs(inst: &CoverInstance, rgs: &[usize]) -> Result<Self> {
        let l = rgs.iter().max().map_or(0, |&b| b + 1);
        let mut parts = vec![0u32; l];
        for (j, &b) in rgs.iter().enumerate() {
            parts[b] |= 1 << j;
        }
        Self::new(inst, parts)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `π_i` as a mask over cover bits.
    pub fn pi(&self, i: usize) -> u32 {
        self.parts[i]
    }

    pub fn internal(&self, i: usize) -> u64 {
        self.internal[i]
    }

    pub fn volume(&self, i: usize) -> u64 {
        self.volume[i]
    }
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&j| mask >> j & 1 == 1)
}

/// `x[t][i]`: outside vertices of the `t`-th present type (see
/// [`CoverInstance::counts`]) placed in part `i`. Columns beyond the cover
/// partition's length are parts made of outside vertices only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountAssignment {
    pub x: Vec<Vec<u64>>,
}

impl CountAssignment {
    pub fn zeros(inst: &CoverInstance, parts: usize) -> Self {
        Self {
            x: vec![vec![0; parts]; inst.counts.len()],
        }
    }

    pub fn parts(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    fn check(&self, inst: &CoverInstance, p: &CoverPartition) -> Result<()> {
        let width_ok = self.x.iter().all(|row| row.len() == self.parts());
        let rows_ok = self.x.len() == inst.counts.len()
            && self
                .x
                .iter()
                .zip(&inst.counts)
                .all(|(row, &(_, c))| row.iter().sum::<u64>() == c);
        if !width_ok {
            return Err(Error::InfeasibleCounts("rows have different lengths".into()));
        }
        if !rows_ok {
            return Err(Error::InfeasibleCounts("row sums differ from the type counts".into()));
        }
        if self.parts() < p.len() && !self.x.is_empty() {
            return Err(Error::InfeasibleCounts("fewer columns than cover parts".into()));
        }
        Ok(())
    }
}

/// The decomposition `4m²·q = 4m·(Σ e(P_i) + θ) − Σ vol(P_i)² − 2φ − ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Terms {
    pub theta: u64,
    pub phi: u64,
    pub psi: u64,
    /// `4m·Σ e(P_i) − Σ vol(P_i)²`.
    pub constant: i128,
}

impl Terms {
    pub fn scaled(&self, m: u64) -> i128 {
        self.constant + 4 * m as i128 * self.theta as i128 - 2 * self.phi as i128 - self.psi as i128
    }
}

impl fmt::Display for Terms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "θ={} φ={} ψ={} const={}", self.theta, self.phi, self.psi, self.constant)
    }
}

pub fn objective_terms(inst: &CoverInstance, p: &CoverPartition, x: &CountAssignment) -> Result<Terms> {
    x.check(inst, p)?;
    let mut theta = 0;
    let mut b = vec![0u64; x.parts()];
    for (row, &(sigma, _)) in x.x.iter().zip(&inst.counts) {
        for (i, &c) in row.iter().enumerate() {
            let pi = if i < p.len() { p.pi(i) } else { 0 };
            theta += c * u64::from((sigma & pi).count_ones());
            b[i] += c * u64::from(sigma.count_ones());
        }
    }
    let vol = |i: usize| if i < p.len() { p.volume(i) } else { 0 };
    let phi = (0..b.len()).map(|i| vol(i) * b[i]).sum();
    let psi = b.iter().map(|&v| v * v).sum();
    let four_m = 4 * inst.m as i128;
    let constant = (0..p.len())
        .map(|i| four_m * p.internal(i) as i128 - (p.volume(i) as i128).pow(2))
        .sum();
    Ok(Terms {
        theta,
        phi,
        psi,
        constant,
    })
}

/// Modularity of the partition described by `p` and `x`.
pub fn modularity_from_counts<S: ScoreInt>(
    inst: &CoverInstance,
    p: &CoverPartition,
    x: &CountAssignment,
) -> Result<ScaledScore<S>> {
    let terms = objective_terms(inst, p, x)?;
    Ok(ScaledScore::new(to_score(terms.scaled(inst.m)), inst.m))
}

fn to_score<S: ScoreInt>(v: i128) -> S {
    S::from_big(&BigInt::from(v)).expect("score numerator out of range for the chosen type")
}

/// Builds the vertex partition: the outside vertices of each type are dealt
/// to parts in ascending vertex order.
pub fn materialize(inst: &CoverInstance, p: &CoverPartition, x: &CountAssignment, n: usize) -> Result<Partition> {
    x.check(inst, p)?;
    let mut assignment = vec![usize::MAX; n];
    for i in 0..p.len() {
        for j in bits(p.pi(i)) {
            assignment[inst.cover[j]] = i;
        }
    }
    for (row, &(sigma, _)) in x.x.iter().zip(&inst.counts) {
        let mut members = inst.typed.iter().filter(|&&(_, s)| s == sigma).map(|&(w, _)| w);
        for (i, &c) in row.iter().enumerate() {
            for w in members.by_ref().take(c as usize) {
                assignment[w] = i;
            }
        }
    }
    if assignment.contains(&usize::MAX) {
        return Err(Error::InvalidPartition("assignment leaves a vertex unplaced".into()));
    }
    Ok(Partition::from_assignment(&assignment).canonical())
}

struct Search<'a> {
    four_m: i128,
    l: usize,
    /// Per type (in search order): index into `inst.counts`, count, |σ|,
    /// per-part edge gain `|σ ∧ π_i|`.
    order: Vec<usize>,
    count: Vec<u64>,
    deg: Vec<i128>,
    gain: Vec<Vec<i128>>,
    /// Per search position: best total edge gain and total volume of all
    /// later types.
    edge_tail: Vec<i128>,
    units_tail: Vec<i128>,
    edges: i128,
    vol: Vec<i128>,
    x: Vec<Vec<u64>>,
    best: i128,
    best_x: Vec<Vec<u64>>,
    nodes: u64,
    node_cap: u64,
    scratch: Vec<i128>,
    _inst: &'a CoverInstance,
}

impl Search<'_> {
    /// Smallest `Σ (vol_i + t_i)²` over non-negative integers with `Σ t_i = units`.
    fn tax_floor(&mut self, units: i128) -> i128 {
        let levels = &mut self.scratch;
        levels.clear();
        levels.extend_from_slice(&self.vol);
        levels.sort_unstable();
        let mut left = units;
        let mut filled = 1;
        // Raise the lowest `filled` parts together to the next level.
        while filled < levels.len() {
            let step = (levels[filled] - levels[0]) * filled as i128;
            if step > left {
                break;
            }
            left -= step;
            let top = levels[filled];
            for v in &mut levels[..filled] {
                *v = top;
            }
            filled += 1;
        }
        let (q, r) = (left / filled as i128, left % filled as i128);
        let base = levels[0] + q;
        let mut total = r * (base + 1).pow(2) + (filled as i128 - r) * base.pow(2);
        total += levels[filled..].iter().map(|v| v * v).sum::<i128>();
        total
    }

    fn bound(&mut self, t: usize, i: usize, r: u64) -> i128 {
        let r = r as i128;
        let best_gain = self.gain[t][i..].iter().copied().max().unwrap_or(0);
        let edges = self.edges + r * best_gain + self.edge_tail[t + 1];
        let units = r * self.deg[t] + self.units_tail[t + 1];
        self.four_m * edges - self.tax_floor(units)
    }

    fn leaf_value(&self) -> i128 {
        self.four_m * self.edges - self.vol.iter().map(|v| v * v).sum::<i128>()
    }

    fn place(&mut self, t: usize, i: usize, c: u64, sign: i128) {
        let c128 = c as i128 * sign;
        self.edges += c128 * self.gain[t][i];
        self.vol[i] += c128 * self.deg[t];
        if sign > 0 {
            self.x[t][i] += c;
        } else {
            self.x[t][i] -= c;
        }
    }

    fn run(&mut self, t: usize, i: usize, r: u64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(Error::SearchBudget { nodes: self.nodes });
        }
        if t == self.order.len() {
            let v = self.leaf_value();
            if v > self.best {
                self.best = v;
                self.best_x = self.x.clone();
            }
            return Ok(());
        }
        if self.bound(t, i, r) <= self.best {
            return Ok(());
        }
        if i + 1 == self.l {
            self.place(t, i, r, 1);
            let next = self.count.get(t + 1).copied().unwrap_or(0);
            let res = self.run(t + 1, 0, next);
            self.place(t, i, r, -1);
            return res;
        }
        for take in (0..=r).rev() {
            self.place(t, i, take, 1);
            let res = self.run(t, i + 1, r - take);
            self.place(t, i, take, -1);
            res?;
        }
        Ok(())
    }
}

/// Counters from [`optimize_partition`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
}

/// Best modularity over partitions whose restriction to the cover is `p` and
/// whose parts all meet the cover, with an optimal count assignment.
pub fn optimize_partition<S: ScoreInt>(
    inst: &CoverInstance,
    p: &CoverPartition,
    node_cap: u64,
) -> Result<(ScaledScore<S>, CountAssignment, SearchStats)> {
    let l = p.len();
    let four_m = 4 * inst.m as i128;
    // Heavy types first: their placement moves the bound the most.
    let mut order: Vec<usize> = (0..inst.counts.len()).collect();
    order.sort_by_key(|&t| {
        let (s, c) = inst.counts[t];
        (std::cmp::Reverse(c * u64::from(s.count_ones())), t)
    });
    let count: Vec<u64> = order.iter().map(|&t| inst.counts[t].1).collect();
    let deg: Vec<i128> = order.iter().map(|&t| inst.counts[t].0.count_ones() as i128).collect();
    let gain: Vec<Vec<i128>> = order
        .iter()
        .map(|&t| (0..l).map(|i| (inst.counts[t].0 & p.pi(i)).count_ones() as i128).collect())
        .collect();
    let mut edge_tail = vec![0i128; order.len() + 1];
    let mut units_tail = vec![0i128; order.len() + 1];
    for t in (0..order.len()).rev() {
        let best_gain = gain[t].iter().copied().max().unwrap_or(0);
        edge_tail[t] = edge_tail[t + 1] + count[t] as i128 * best_gain;
        units_tail[t] = units_tail[t + 1] + count[t] as i128 * deg[t];
    }
    let mut search = Search {
        four_m,
        l,
        order,
        count,
        deg,
        gain,
        edge_tail,
        units_tail,
        edges: (0..l).map(|i| p.internal(i) as i128).sum(),
        vol: (0..l).map(|i| p.volume(i) as i128).collect(),
        x: vec![vec![0; l]; inst.counts.len()],
        best: i128::MIN,
        best_x: Vec::new(),
        nodes: 0,
        node_cap,
        scratch: Vec::with_capacity(l),
        _inst: inst,
    };

    // Greedy incumbent: vertices one at a time to the best marginal part.
    for t in 0..search.order.len() {
        for _ in 0..search.count[t] {
            let d = search.deg[t];
            let i = (0..l)
                .max_by_key(|&i| {
                    let delta = four_m * search.gain[t][i] - (2 * search.vol[i] * d + d * d);
                    (delta, std::cmp::Reverse(i))
                })
                .unwrap();
            search.place(t, i, 1, 1);
        }
    }
    search.best = search.leaf_value();
    search.best_x = search.x.clone();
    for row in &mut search.x {
        row.iter_mut().for_each(|c| *c = 0);
    }
    search.edges = (0..l).map(|i| p.internal(i) as i128).sum();
    search.vol = (0..l).map(|i| p.volume(i) as i128).collect();

    let first = search.count.first().copied().unwrap_or(0);
    search.run(0, 0, first)?;

    let mut x = CountAssignment::zeros(inst, l);
    for (pos, &t) in search.order.iter().enumerate() {
        x.x[t] = search.best_x[pos].clone();
    }
    let q = ScaledScore::new(to_score(search.best), inst.m);
    Ok((q, x, SearchStats { nodes: search.nodes }))
}

/// Options for [`solve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VcOptions {
    pub cover_cap: usize,
    pub node_cap: u64,
}

impl Default for VcOptions {
    fn default() -> Self {
        Self {
            cover_cap: DEFAULT_COVER_CAP,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VcOutcome<S: ScoreInt> {
    pub solution: Solution<S>,
    /// Cover of the graph without isolated vertices, in original indices.
    pub cover: Vec<usize>,
    pub cover_partitions: usize,
    pub nodes: u64,
}

/// Maximum modularity via a minimum vertex cover.
pub fn solve<S: ScoreInt>(g: &Graph, opts: VcOptions) -> Result<VcOutcome<S>> {
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    let stripped = g.strip_isolated();
    let h = &stripped.graph;
    let cover = (0..=opts.cover_cap)
        .find_map(|k| vertex_cover_at_most(h, k))
        .ok_or(Error::CapExceeded {
            what: "vertex cover",
            size: opts.cover_cap + 1,
            cap: opts.cover_cap,
        })?;
    let inst = classify_types(h, &cover)?;
    let mut best: Option<(ScaledScore<S>, CoverPartition, CountAssignment)> = None;
    let mut count = 0;
    let mut nodes = 0;
    for rgs in RgsIter::new(inst.k()) {
        count += 1;
        let p = CoverPartition::from_rgs(&inst, &rgs)?;
        let remaining = opts.node_cap.saturating_sub(nodes);
        let (q, x, stats) = optimize_partition::<S>(&inst, &p, remaining).map_err(|e| match e {
            Error::SearchBudget { nodes: more } => Error::SearchBudget { nodes: nodes + more },
            other => other,
        })?;
        nodes += stats.nodes;
        if best.as_ref().is_none_or(|(b, _, _)| q > *b) {
            best = Some((q, p, x));
        }
    }
    let (q, p, x) = best.expect("the cover has at least one partition");
    let partition = materialize(&inst, &p, &x, h.n())?.lift(&stripped);
    Ok(VcOutcome {
        solution: Solution { q, partition },
        cover: inst.cover.iter().map(|&u| stripped.original[u]).collect(),
        cover_partitions: count,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force, Restriction};
    use crate::score::score_partition;

    /// The worked typing example: cover {u1, u2} plus eight outside vertices.
    fn typed_example() -> (Graph, VertexSet) {
        // 0 = u1, 1 = u2, 2..=9 = w1..w8.
        let g = Graph::from_edges(
            10,
            &[(0, 4), (0, 8), (0, 9), (1, 5), (1, 6), (1, 7), (1, 8), (1, 9)],
        )
        .unwrap();
        (g, [0, 1].into_iter().collect())
    }

    #[test]
    fn type_counts() {
        let (g, u) = typed_example();
        let inst = classify_types(&g, &u).unwrap();
        let by_string = |s: &str| {
            let sigma = (0..2).filter(|&j| &s[j..j + 1] == "1").fold(0, |a, j| a | 1 << j);
            inst.count(sigma)
        };
        assert_eq!(by_string("00"), 2);
        assert_eq!(by_string("10"), 1);
        assert_eq!(by_string("01"), 3);
        assert_eq!(by_string("11"), 2);
        assert_eq!(inst.counts().iter().map(|&(_, c)| c).sum::<u64>(), 8);
        assert_eq!(inst.typed().len(), 8);
    }

    #[test]
    fn trivial_typings() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let inst = classify_types(&k2, &[0].into_iter().collect()).unwrap();
        assert_eq!(inst.counts(), &[(1, 1)]);
        let inst = classify_types(&k2, &[0, 1].into_iter().collect()).unwrap();
        assert!(inst.counts().is_empty());
        assert!(matches!(
            classify_types(&Graph::from_edges(3, &[(1, 2)]).unwrap(), &[0].into_iter().collect()),
            Err(Error::NotACover(1, 2))
        ));
    }

    #[test]
    fn displayed_partition_scores_directly() {
        let (g, u) = typed_example();
        let inst = classify_types(&g, &u).unwrap();
        let p = CoverPartition::new(&inst, vec![0b01, 0b10]).unwrap();
        // Rows follow ascending masks: types 00, 10, 01, 11 (u1 first). The
        // third column is the part made of outside vertices only.
        let x = CountAssignment {
            x: vec![vec![2, 0, 0], vec![1, 0, 0], vec![0, 1, 2], vec![0, 2, 0]],
        };
        let direct = Partition::from_assignment(&[0, 1, 0, 0, 0, 2, 2, 1, 1, 1]);
        let q: ScaledScore<i64> = modularity_from_counts(&inst, &p, &x).unwrap();
        assert_eq!(q, score_partition::<i64>(&g, &direct).unwrap().q);
        let dealt = materialize(&inst, &p, &x, 10).unwrap();
        assert_eq!(score_partition::<i64>(&g, &dealt).unwrap().q, q);
    }

    #[test]
    fn edge_term_counts_neighbours_in_own_part() {
        let (g, u) = typed_example();
        let inst = classify_types(&g, &u).unwrap();
        let p = CoverPartition::new(&inst, vec![0b11]).unwrap();
        let x = CountAssignment {
            x: inst.counts().iter().map(|&(_, c)| vec![c]).collect(),
        };
        let terms = objective_terms(&inst, &p, &x).unwrap();
        // Every edge has its cover end in the single part.
        assert_eq!(terms.theta, 8);
        let bad = CountAssignment { x: vec![vec![0]; 4] };
        assert!(matches!(objective_terms(&inst, &p, &bad), Err(Error::InfeasibleCounts(_))));
    }

    #[test]
    fn empty_outside_scores_cover_partition() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = classify_types(&k3, &VertexSet::full(3)).unwrap();
        let p = CoverPartition::from_rgs(&inst, &[0, 0, 1]).unwrap();
        let q: ScaledScore<i64> = modularity_from_counts(&inst, &p, &CountAssignment { x: vec![] }).unwrap();
        let direct = Partition::from_assignment(&[0, 0, 1]);
        assert_eq!(q, score_partition::<i64>(&k3, &direct).unwrap().q);
    }

    #[test]
    fn optimize_small() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let inst = classify_types(&k2, &[0].into_iter().collect()).unwrap();
        let p = CoverPartition::new(&inst, vec![1]).unwrap();
        let (q, x, _) = optimize_partition::<i64>(&inst, &p, u64::MAX).unwrap();
        assert!(q.is_zero());
        assert_eq!(x.x, vec![vec![1]]);

        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let inst = classify_types(&star, &[0].into_iter().collect()).unwrap();
        let p = CoverPartition::new(&inst, vec![1]).unwrap();
        let (q, x, _) = optimize_partition::<i64>(&inst, &p, u64::MAX).unwrap();
        assert!(q.is_zero());
        assert_eq!(x.x, vec![vec![3]]);
    }

    #[test]
    fn optimize_matches_exhaustive_assignment() {
        let (g, u) = typed_example();
        let inst = classify_types(&g, &u).unwrap();
        let p = CoverPartition::new(&inst, vec![0b01, 0b10]).unwrap();
        let (q, _, _) = optimize_partition::<i64>(&inst, &p, u64::MAX).unwrap();
        // Each of w1..w8 joins u1's part or u2's part.
        let mut best = None;
        for mask in 0u32..1 << 8 {
            let mut assign = vec![0, 1];
            assign.extend((0..8).map(|b| (mask >> b & 1) as usize));
            let part = Partition::from_assignment(&assign);
            let s = score_partition::<i64>(&g, &part).unwrap().q;
            if best.as_ref().is_none_or(|b| s > *b) {
                best = Some(s);
            }
        }
        assert_eq!(q, best.unwrap());
    }

    #[test]
    fn budget() {
        let (g, u) = typed_example();
        let inst = classify_types(&g, &u).unwrap();
        let p = CoverPartition::new(&inst, vec![0b01, 0b10]).unwrap();
        assert!(matches!(
            optimize_partition::<i64>(&inst, &p, 0),
            Err(Error::SearchBudget { .. })
        ));
    }

    fn solved(n: usize, e: &[(usize, usize)]) -> Solution<i128> {
        let g = Graph::from_edges(n, e).unwrap();
        let out = solve::<i128>(&g, VcOptions::default()).unwrap();
        assert_eq!(score_partition::<i128>(&g, &out.solution.partition).unwrap().q, out.solution.q);
        assert_eq!(brute_force::<i128>(&g, Restriction::None).unwrap().q, out.solution.q);
        out.solution
    }

    #[test]
    fn solve_examples() {
        for n in 2..=6 {
            let kn: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            assert!(solved(n, &kn).q.is_zero());
        }
        assert_eq!(solved(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).q.to_string(), "1/2");
        assert_eq!(solved(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).q.to_string(), "2/25");
        let (g, _) = typed_example();
        let out = solve::<i128>(&g, VcOptions::default()).unwrap();
        assert_eq!(brute_force::<i128>(&g, Restriction::None).unwrap().q, out.solution.q);
    }

    #[test]
    fn cover_cap() {
        let g = Graph::from_edges(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        let opts = VcOptions { cover_cap: 2, ..Default::default() };
        assert!(matches!(solve::<i64>(&g, opts), Err(Error::CapExceeded { .. })));
    }
}
