//! Reduction gadgets from anchored equitable connected partition (AECP)
//! instances to modularity instances, plus exact threshold tests on the
//! per-unit deficit `f_m(B) = ∂(B)/vol(B) + vol(B)/2m`.
//!
//! An AECP instance is a graph `H` with anchors `a_1 … a_r` and asks for a
//! partition of `V(H)` into `r` connected classes of equal size `s = |H|/r`,
//! one anchor per class. The gadget `G` adds `α` leaves to every anchor, `β`
//! disjoint edges and the matching `a_1a_2, a_3a_4, …`, with `α` and `β`
//! chosen so that `2m = (s + α + 1)²`. A witness for `H` then lifts to a
//! partition of `G` scoring exactly `q₀`.
//!
//! All comparisons against `2√(2/m)` are done on squared integers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::partition::Partition;
use crate::scalar::ScaledScore;
use crate::vertex_set::VertexSet;

/// Largest gadget [`build_gadget`] will materialise.
pub const MAX_GADGET_VERTICES: u64 = 20_000_000;

/// A failed AECP structural condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AecpViolation {
    AnchorOutOfRange { anchor: usize },
    DuplicateAnchor { anchor: usize },
    /// Condition 1.
    Disconnected { components: usize },
    /// Condition 2.
    NotSubdivision { vertex: usize, reason: String },
    /// Condition 3.
    BranchMismatch { vertex: usize, degree: usize, anchor: bool },
    /// Condition 4.
    AnchorCount { r: usize, n: usize },
    /// Condition 5.
    NotCaterpillarForest { vertex: usize, reason: String },
}

impl fmt::Display for AecpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AnchorOutOfRange { anchor } => write!(f, "anchor {anchor} is not a vertex"),
            Self::DuplicateAnchor { anchor } => write!(f, "anchor {anchor} listed twice"),
            Self::Disconnected { components } => {
                write!(f, "condition 1: H has {components} components")
            }
            Self::NotSubdivision { vertex, reason } => {
                write!(f, "condition 2: at vertex {vertex}: {reason}")
            }
            Self::BranchMismatch { vertex, degree, anchor: true } => write!(
                f,
                "condition 3: anchor {vertex} has degree {degree} after removing leaves, expected 3"
            ),
            Self::BranchMismatch { vertex, degree, anchor: false } => write!(
                f,
                "condition 3: vertex {vertex} has degree {degree} after removing leaves but is not an anchor"
            ),
            Self::AnchorCount { r, n } => write!(
                f,
                "condition 4: r = {r} anchors must be even, at least 4 and divide |V_H| = {n}"
            ),
            Self::NotCaterpillarForest { vertex, reason } => {
                write!(f, "condition 5: at vertex {vertex}: {reason}")
            }
        }
    }
}

impl AecpViolation {
    /// Like `Display`, with vertices named by their labels in `h`.
    pub fn describe(&self, h: &Graph) -> String {
        let name = |v: usize| if v < h.n() { format!("`{}`", h.label(v)) } else { v.to_string() };
        match self {
            Self::AnchorOutOfRange { anchor } => format!("anchor {anchor} is not a vertex"),
            Self::DuplicateAnchor { anchor } => format!("anchor {} listed twice", name(*anchor)),
            Self::NotSubdivision { vertex, reason } => {
                format!("condition 2: at vertex {}: {reason}", name(*vertex))
            }
            Self::BranchMismatch { vertex, degree, anchor } => format!(
                "condition 3: {} {} has degree {degree} after removing leaves{}",
                if *anchor { "anchor" } else { "vertex" },
                name(*vertex),
                if *anchor { ", expected 3" } else { " but is not an anchor" }
            ),
            Self::NotCaterpillarForest { vertex, reason } => {
                format!("condition 5: at vertex {}: {reason}", name(*vertex))
            }
            other => other.to_string(),
        }
    }
}

/// Where `f_m(B)` lies relative to `2√(2/m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threshold {
    Below,
    Equal,
    Above,
}

impl From<Ordering> for Threshold {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Self::Below,
            Ordering::Equal => Self::Equal,
            Ordering::Greater => Self::Above,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Below => "below",
            Self::Equal => "equal",
            Self::Above => "above",
        })
    }
}

/// `f_m(B)` as a reduced fraction and its position against `2√(2/m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deficit {
    pub relation: Threshold,
    pub num: BigInt,
    pub den: BigInt,
}

impl Deficit {
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.num.to_f64().unwrap_or(f64::NAN) / self.den.to_f64().unwrap_or(f64::NAN)
    }
}

/// `f_m(B) = (2m∂ + vol²) / (2m·vol)` compared with `2√(2/m)` through
/// `(2m∂ + vol²)²` versus `32·m·vol²`; both sides are positive.
pub fn per_unit_deficit(boundary: u64, volume: u64, m: u64) -> Result<Deficit> {
    if volume == 0 || m == 0 {
        return Err(Error::InvalidArgument(
            "per-unit deficit needs positive volume and edge count".into(),
        ));
    }
    let (b, v, m) = (BigInt::from(boundary), BigInt::from(volume), BigInt::from(m));
    let num = BigInt::from(2) * &m * &b + &v * &v;
    let den = BigInt::from(2) * &m * &v;
    let relation = (&num * &num).cmp(&(BigInt::from(32) * &m * &v * &v)).into();
    let g = num.gcd(&den);
    Ok(Deficit {
        relation,
        num: num / &g,
        den: den / g,
    })
}

/// Which side of the window a volume falls on, relative to `2√(2m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

/// Threshold clause selected by the boundary size, whether the volume lies in
/// the clause's window, and the actual position of `f_m(B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdReport {
    /// `min(∂, 5)`.
    pub clause: u8,
    /// The volume lies in the window where the clause guarantees
    /// `f_m(B) > 2√(2/m)` (or `≥` for clause 4).
    pub in_window: bool,
    pub side: Option<Side>,
    pub relation: Threshold,
    pub text: String,
}

/// Clause report for a set with boundary `∂` and volume `vol` in a graph
/// with `m` edges. With `R = √(2m)` the windows are:
///
/// | ∂   | window                                   |
/// |-----|------------------------------------------|
/// | 0   | `vol > 4R`                               |
/// | 1   | `vol > (2+√3)R` or `vol < (2−√3)R`       |
/// | 2   | `vol > (2+√2)R` or `vol < (2−√2)R`       |
/// | 3   | `vol > 3R` or `vol < R`                  |
/// | 4   | `vol ≥ 2R`, equality iff `vol = 2R`      |
/// | ≥ 5 | always                                   |
///
/// For `∂ ∈ {1, 2}` the window is exactly `(vol/R − 2)² > 4 − ∂`, which is
/// the strict comparison itself, so it is decided by the same integer test.
pub fn classify_deficit(boundary: u64, volume: u64, m: u64) -> Result<ThresholdReport> {
    let d = per_unit_deficit(boundary, volume, m)?;
    let v2 = u128::from(volume).pow(2);
    let m = u128::from(m);
    let upper_or_lower = |upper: bool| Some(if upper { Side::Upper } else { Side::Lower });
    let (clause, in_window, side, text) = match boundary {
        0 => (0, v2 > 32 * m, None, "∂ = 0: vol > 4·√(2m)".to_string()),
        1 | 2 => {
            let (hi, lo) = if boundary == 1 { ("3.7321", "0.2679") } else { ("3.4143", "0.5857") };
            (
                boundary as u8,
                d.relation == Threshold::Above,
                upper_or_lower(v2 > 8 * m),
                format!("∂ = {boundary}: vol > {hi}·√(2m) or vol < {lo}·√(2m)"),
            )
        }
        3 => {
            let (hi, lo) = (v2 > 18 * m, v2 < 2 * m);
            (3, hi || lo, upper_or_lower(v2 > 8 * m), "∂ = 3: vol > 3·√(2m) or vol < √(2m)".to_string())
        }
        4 => (4, v2 >= 8 * m, None, "∂ = 4: vol ≥ 2·√(2m), equality iff vol = 2·√(2m)".to_string()),
        _ => (5, true, None, "∂ ≥ 5: always above".to_string()),
    };
    Ok(ThresholdReport {
        clause,
        in_window,
        side: if in_window { side } else { None },
        relation: d.relation,
        text,
    })
}

/// Checks that removing `removed` from `g` leaves isolated vertices and
/// caterpillars (trees whose non-leaf vertices form a path). Returns the
/// first offending vertex.
pub fn caterpillar_violation(g: &Graph, removed: &VertexSet) -> Option<(usize, String)> {
    let n = g.n();
    let inner_degree = |v: usize| g.neighbors(v).iter().filter(|&&u| !removed.contains(u)).count();
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] || removed.contains(start) {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            for &u in g.neighbors(comp[i]) {
                if !seen[u] && !removed.contains(u) {
                    seen[u] = true;
                    comp.push(u);
                }
            }
            i += 1;
        }
        let twice_edges: usize = comp.iter().map(|&v| inner_degree(v)).sum();
        if twice_edges / 2 != comp.len() - 1 {
            let v = *comp.iter().min().unwrap();
            return Some((v, "its component contains a cycle".into()));
        }
        for &v in &comp {
            if inner_degree(v) < 2 {
                continue;
            }
            let spine = g
                .neighbors(v)
                .iter()
                .filter(|&&u| !removed.contains(u) && inner_degree(u) >= 2)
                .count();
            if spine > 2 {
                return Some((v, format!("{spine} non-leaf neighbours, so its tree is not a caterpillar")));
            }
        }
    }
    None
}

/// Checks the structural conditions required of an instance:
///
/// 1. `H` is connected.
/// 2. Deleting the degree-one vertices of `H` leaves a subdivision of a
///    3-regular graph (degrees 2 and 3 only, no cycle without a branch vertex).
/// 3. The branch (degree-3) vertices of that graph are exactly the anchors.
/// 4. `r ≥ 4` is even and divides `|V(H)|`.
/// 5. `H` minus the anchors is a disjoint union of isolated vertices and
///    caterpillars.
pub fn validate_aecp(h: &Graph, anchors: &[usize]) -> Vec<AecpViolation> {
    let n = h.n();
    let mut out = Vec::new();
    let mut anchor_set = VertexSet::with_capacity(n);
    for &a in anchors {
        if a >= n {
            out.push(AecpViolation::AnchorOutOfRange { anchor: a });
        } else if !anchor_set.insert(a) {
            out.push(AecpViolation::DuplicateAnchor { anchor: a });
        }
    }

    let components = h.connected_components().len();
    if components != 1 {
        out.push(AecpViolation::Disconnected { components });
    }

    let kept: Vec<bool> = (0..n).map(|v| h.degree(v) != 1).collect();
    let core_degree: Vec<usize> = (0..n)
        .map(|v| if kept[v] { h.neighbors(v).iter().filter(|&&u| kept[u]).count() } else { 0 })
        .collect();
    let mut shape_ok = true;
    for v in (0..n).filter(|&v| kept[v]) {
        if !(2..=3).contains(&core_degree[v]) {
            shape_ok = false;
            out.push(AecpViolation::NotSubdivision {
                vertex: v,
                reason: format!("degree {} after removing leaves", core_degree[v]),
            });
        }
    }
    if shape_ok {
        // A component of the core without a degree-3 vertex is a bare cycle.
        let mut seen = vec![false; n];
        let mut any_core = false;
        for start in (0..n).filter(|&v| kept[v]) {
            any_core = true;
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            seen[start] = true;
            let mut has_branch = false;
            while let Some(v) = stack.pop() {
                has_branch |= core_degree[v] == 3;
                for &u in h.neighbors(v) {
                    if kept[u] && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            if !has_branch {
                out.push(AecpViolation::NotSubdivision {
                    vertex: start,
                    reason: "cycle without branch vertices".into(),
                });
            }
        }
        if !any_core {
            out.push(AecpViolation::NotSubdivision {
                vertex: 0,
                reason: "nothing is left after removing leaves".into(),
            });
        }
    }

    for (v, &degree) in core_degree.iter().enumerate() {
        let is_anchor = anchor_set.contains(v);
        if degree == 3 && !is_anchor {
            out.push(AecpViolation::BranchMismatch { vertex: v, degree, anchor: false });
        } else if is_anchor && degree != 3 {
            out.push(AecpViolation::BranchMismatch {
                vertex: v,
                degree,
                anchor: true,
            });
        }
    }

    let r = anchors.len();
    if r < 4 || r % 2 == 1 || !n.is_multiple_of(r) {
        out.push(AecpViolation::AnchorCount { r, n });
    }

    if let Some((vertex, reason)) = caterpillar_violation(h, &anchor_set) {
        out.push(AecpViolation::NotCaterpillarForest { vertex, reason });
    }
    out
}

/// Gadget sizes and target value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetParams {
    pub h_vertices: u64,
    pub h_edges: u64,
    pub r: u64,
    pub s: u64,
    pub alpha: u64,
    pub beta: u64,
    pub m: u64,
    /// `√(2m) = s + α + 1`.
    pub root: u64,
    /// `α` is below `32·|E(H)|²`: the arithmetic is exact but the
    /// reduction's no-direction is not guaranteed.
    pub unsafe_alpha: bool,
}

fn size_condition(alpha: u64, h_edges: u64, s: u64, r: u64) -> bool {
    u128::from(alpha + s + 1).pow(2) > u128::from(2 * h_edges + 2 * alpha * r + r)
}

/// Least `α ≥ 32·|E(H)|²` with `α ≡ s + 1 (mod 2)` and
/// `(α + s + 1)² > 2|E(H)| + 2αr + r`.
pub fn default_alpha(h_edges: u64, s: u64, r: u64) -> u64 {
    let mut alpha = 32 * h_edges * h_edges;
    if alpha % 2 != (s + 1) % 2 {
        alpha += 1;
    }
    while !size_condition(alpha, h_edges, s, r) {
        alpha += 2;
    }
    alpha
}

impl GadgetParams {
    /// Parameters for an instance with the given sizes; `alpha` overrides
    /// [`default_alpha`] and must meet its parity and size conditions.
    pub fn new(h_vertices: u64, h_edges: u64, r: u64, alpha: Option<u64>) -> Result<Self> {
        if r == 0 || r % 2 == 1 || !h_vertices.is_multiple_of(r) {
            return Err(Error::InvalidArgument(format!(
                "anchor count {r} must be even and divide |V(H)| = {h_vertices}"
            )));
        }
        let s = h_vertices / r;
        let alpha = match alpha {
            None => default_alpha(h_edges, s, r),
            Some(a) => {
                if a % 2 != (s + 1) % 2 {
                    return Err(Error::InvalidAlpha(format!(
                        "alpha = {a} must have the parity of s + 1 = {}",
                        s + 1
                    )));
                }
                if !size_condition(a, h_edges, s, r) {
                    return Err(Error::InvalidAlpha(format!(
                        "alpha = {a} violates (alpha + s + 1)^2 > 2|E(H)| + 2·alpha·r + r"
                    )));
                }
                a
            }
        };
        let root = alpha + s + 1;
        let beta = (root * root - r) / 2 - h_edges - alpha * r;
        let m = h_edges + alpha * r + beta + r / 2;
        debug_assert_eq!(2 * m, root * root);
        Ok(Self {
            h_vertices,
            h_edges,
            r,
            s,
            alpha,
            beta,
            m,
            root,
            unsafe_alpha: u128::from(alpha) < 32 * u128::from(h_edges).pow(2),
        })
    }

    pub fn vertices(&self) -> u64 {
        self.h_vertices + self.alpha * self.r + 2 * self.beta
    }

    /// `q₀ = 1 − β/m² − 2√2(m − β)/m^{3/2}`; with `√(2m)` integral its
    /// scaled numerator is `4m² − 4β − 8·√(2m)·(m − β)`.
    pub fn q0(&self) -> ScaledScore<BigInt> {
        let m = BigInt::from(self.m);
        let beta = BigInt::from(self.beta);
        let num = BigInt::from(4) * &m * &m
            - BigInt::from(4) * &beta
            - BigInt::from(8) * BigInt::from(self.root) * (&m - &beta);
        ScaledScore::new(num, self.m)
    }

    /// `α > 0.969·√(2m)`, as `1000α > 969(s + α + 1)`.
    pub fn alpha_ratio_holds(&self) -> bool {
        1000 * u128::from(self.alpha) > 969 * u128::from(self.root)
    }
}

/// A built gadget. Vertex layout: `H`'s vertices first (same indices), then
/// `α` leaves per anchor in anchor order, then the `β` edges as consecutive
/// pairs.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub graph: Graph,
    pub params: GadgetParams,
    pub anchors: Vec<usize>,
}

impl Gadget {
    pub fn leaf(&self, anchor_pos: usize, j: u64) -> usize {
        (self.params.h_vertices + anchor_pos as u64 * self.params.alpha + j) as usize
    }

    pub fn pair(&self, k: u64) -> (usize, usize) {
        let base = self.params.h_vertices + self.params.r * self.params.alpha + 2 * k;
        (base as usize, base as usize + 1)
    }
}

/// Labels for new vertices: continuing integers when every label of `H` is
/// an integer, otherwise `<prefix><index>` with a prefix no label starts with.
fn new_labeler(h: &Graph) -> Box<dyn Fn(usize) -> String> {
    let numeric: Option<Vec<u64>> = h.labels().iter().map(|l| l.parse().ok()).collect();
    match numeric {
        Some(values) => {
            let next = values.iter().max().map_or(0, |&x| x + 1);
            let n = h.n() as u64;
            Box::new(move |v| (next + v as u64 - n).to_string())
        }
        None => {
            let mut prefix = String::from("g");
            while h.labels().iter().any(|l| l.starts_with(&prefix)) {
                prefix.push('_');
            }
            Box::new(move |v| format!("{prefix}{v}"))
        }
    }
}

/// Validates the instance, then builds the gadget graph.
pub fn build_gadget(h: &Graph, anchors: &[usize], alpha: Option<u64>) -> Result<Gadget> {
    let violations = validate_aecp(h, anchors);
    if !violations.is_empty() {
        return Err(Error::InvalidAecp(violations));
    }
    let params = GadgetParams::new(h.n() as u64, h.m(), anchors.len() as u64, alpha)?;
    if params.vertices() > MAX_GADGET_VERTICES {
        return Err(Error::CapExceeded {
            what: "gadget vertices",
            size: params.vertices().min(usize::MAX as u64) as usize,
            cap: MAX_GADGET_VERTICES as usize,
        });
    }
    let label = new_labeler(h);
    let mut b = GraphBuilder::new();
    for v in 0..h.n() {
        b.vertex(h.label(v));
    }
    let mut line = 0;
    let mut edge = |b: &mut GraphBuilder, u: &str, v: &str| {
        line += 1;
        b.edge(u, v, line)
    };
    for &(u, v) in h.edges() {
        edge(&mut b, h.label(u), h.label(v))?;
    }
    let mut next = h.n();
    for &a in anchors {
        for _ in 0..params.alpha {
            edge(&mut b, h.label(a), &label(next))?;
            next += 1;
        }
    }
    for _ in 0..params.beta {
        edge(&mut b, &label(next), &label(next + 1))?;
        next += 2;
    }
    for pair in anchors.chunks(2) {
        if h.has_edge(pair[0], pair[1]) {
            return Err(Error::InvalidArgument(format!(
                "anchors `{}` and `{}` are adjacent, so the anchor matching would repeat an edge",
                h.label(pair[0]),
                h.label(pair[1])
            )));
        }
        edge(&mut b, h.label(pair[0]), h.label(pair[1]))?;
    }
    let graph = b.build();
    debug_assert_eq!(graph.m(), params.m);
    Ok(Gadget {
        graph,
        params,
        anchors: anchors.to_vec(),
    })
}

/// Lifts an AECP witness on `H` to a partition of the gadget: each class
/// takes its anchor's leaves and every added edge is its own part. Every
/// class must then have boundary 4 and volume `2·√(2m)`.
pub fn witness_to_partition(gadget: &Gadget, h_parts: &Partition) -> Result<Partition> {
    let p = &gadget.params;
    let h_n = p.h_vertices as usize;
    if h_parts.n() != h_n {
        return Err(Error::InvalidWitness(format!(
            "witness covers {} vertices, H has {h_n}",
            h_parts.n()
        )));
    }
    if h_parts.len() as u64 != p.r {
        return Err(Error::InvalidWitness(format!(
            "witness has {} classes, expected r = {}",
            h_parts.len(),
            p.r
        )));
    }
    let g = &gadget.graph;
    let mut assignment = vec![usize::MAX; g.n()];
    for (i, part) in h_parts.parts().iter().enumerate() {
        if part.len() as u64 != p.s {
            return Err(Error::InvalidWitness(format!(
                "class {i} has {} vertices, expected s = {}",
                part.len(),
                p.s
            )));
        }
        let held: Vec<usize> = (0..gadget.anchors.len())
            .filter(|&j| part.contains(gadget.anchors[j]))
            .collect();
        let [pos] = held[..] else {
            return Err(Error::InvalidWitness(format!(
                "class {i} holds {} anchors, expected exactly one",
                held.len()
            )));
        };
        // One anchor per class, so the anchor matching adds no internal edge.
        if !g.is_connected_set(part) {
            return Err(Error::InvalidWitness(format!("class {i} is not connected")));
        }
        for v in part.iter() {
            assignment[v] = i;
        }
        for j in 0..p.alpha {
            assignment[gadget.leaf(pos, j)] = i;
        }
    }
    for k in 0..p.beta {
        let (u, v) = gadget.pair(k);
        assignment[u] = p.r as usize + k as usize;
        assignment[v] = p.r as usize + k as usize;
    }
    let lifted = Partition::from_assignment(&assignment);
    for part in lifted.parts().iter().take(p.r as usize) {
        let st = g.set_stats(part);
        if st.boundary != 4 || st.volume != 2 * p.root {
            return Err(Error::InvalidWitness(format!(
                "a lifted class has boundary {} and volume {}, expected 4 and {}",
                st.boundary,
                st.volume,
                2 * p.root
            )));
        }
    }
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::score::score_partition;

    /// K4 on a1..a4 with every edge subdivided, plus leaves p1 on s12 and p2
    /// on s23.
    fn subdivided_k4() -> (Graph, Vec<usize>) {
        let edges = [
            ("a1", "s12"), ("s12", "a2"), ("a1", "s13"), ("s13", "a3"),
            ("a1", "s14"), ("s14", "a4"), ("a2", "s23"), ("s23", "a3"),
            ("a2", "s24"), ("s24", "a4"), ("a3", "s34"), ("s34", "a4"),
            ("s12", "p1"), ("s23", "p2"),
        ];
        let h = Graph::from_labeled_edges(&edges, &[]).unwrap();
        let anchors = ["a1", "a2", "a3", "a4"].iter().map(|l| h.vertex_by_label(l).unwrap()).collect();
        (h, anchors)
    }

    fn witness(h: &Graph, classes: &[&[&str]]) -> Partition {
        let mut assignment = vec![usize::MAX; h.n()];
        for (i, class) in classes.iter().enumerate() {
            for l in *class {
                assignment[h.vertex_by_label(l).unwrap()] = i;
            }
        }
        Partition::from_assignment(&assignment)
    }

    const WITNESS: [&[&str]; 4] = [
        &["a1", "s12", "p1"],
        &["a2", "s23", "p2"],
        &["a3", "s13", "s34"],
        &["a4", "s14", "s24"],
    ];

    #[test]
    fn deficit_comparator() {
        assert_eq!(per_unit_deficit(4, 8, 8).unwrap().relation, Threshold::Equal);
        let d = per_unit_deficit(4, 24, 72).unwrap();
        assert_eq!(d.relation, Threshold::Equal);
        assert_eq!((d.num.clone(), d.den.clone()), (BigInt::from(1), BigInt::from(3)));
        for m in 1..200 {
            assert_eq!(per_unit_deficit(0, 2, m).unwrap().relation, Threshold::Below);
        }
        assert!(per_unit_deficit(1, 0, 5).is_err());
    }

    #[test]
    fn clause_examples() {
        let r = classify_deficit(5, 17, 40).unwrap();
        assert_eq!((r.clause, r.in_window, r.relation), (5, true, Threshold::Above));
        let r = classify_deficit(4, 8, 8).unwrap();
        assert_eq!((r.clause, r.in_window, r.relation), (4, true, Threshold::Equal));
        // m = 8: √(2m) = 4, so vol = 13 > 12 = 3·√(2m).
        let r = classify_deficit(3, 13, 8).unwrap();
        assert_eq!((r.in_window, r.side, r.relation), (true, Some(Side::Upper), Threshold::Above));
        let r = classify_deficit(3, 8, 8).unwrap();
        assert!(!r.in_window);
    }

    #[test]
    fn windows_imply_their_conclusion() {
        for m in 1..60u64 {
            for vol in 1..=2 * m {
                for b in 0..7 {
                    let r = classify_deficit(b, vol, m).unwrap();
                    if !r.in_window {
                        continue;
                    }
                    match r.clause {
                        4 => {
                            assert_ne!(r.relation, Threshold::Below);
                            assert_eq!(r.relation == Threshold::Equal, vol * vol == 8 * m);
                        }
                        _ => assert_eq!(r.relation, Threshold::Above, "∂={b} vol={vol} m={m}"),
                    }
                }
            }
        }
    }

    #[test]
    fn example_instance_is_valid() {
        let (h, anchors) = subdivided_k4();
        assert_eq!(validate_aecp(&h, &anchors), vec![]);
    }

    #[test]
    fn violations_are_reported() {
        let (h, anchors) = subdivided_k4();
        let v = validate_aecp(&h, &anchors[..3]);
        assert!(v.iter().any(|x| matches!(x, AecpViolation::AnchorCount { r: 3, .. })));
        assert!(v.iter().any(|x| matches!(x, AecpViolation::BranchMismatch { anchor: false, .. })));
        let s12 = h.vertex_by_label("s12").unwrap();
        let mut wrong = anchors.clone();
        wrong[0] = s12;
        let v = validate_aecp(&h, &wrong);
        assert!(v.iter().any(|x| matches!(x, AecpViolation::BranchMismatch { vertex, degree: 2, anchor: true } if *vertex == s12)));
        let cycle = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let v = validate_aecp(&cycle, &[]);
        assert!(v.iter().any(|x| matches!(x, AecpViolation::NotSubdivision { .. })));
    }

    #[test]
    fn override_parameters() {
        let (h, anchors) = subdivided_k4();
        let g = build_gadget(&h, &anchors, Some(8)).unwrap();
        let p = &g.params;
        assert_eq!((p.m, p.beta, p.root, p.s), (72, 24, 12, 3));
        assert!(p.unsafe_alpha);
        assert_eq!(g.graph.m(), 72);
        assert_eq!(g.graph.n() as u64, p.vertices());
        assert_eq!(p.q0().to_string(), "167/216");
        assert_eq!(p.q0().num(), &BigInt::from(16032));
        assert!(matches!(build_gadget(&h, &anchors, Some(7)), Err(Error::InvalidAlpha(_))));
        assert!(matches!(build_gadget(&h, &anchors, Some(2)), Err(Error::InvalidAlpha(_))));
    }

    #[test]
    fn default_parameters() {
        let p = GadgetParams::new(12, 14, 4, None).unwrap();
        assert_eq!(p.alpha, 6272);
        assert!(!p.unsafe_alpha);
        assert!(p.alpha_ratio_holds());
        assert_eq!(2 * p.m, p.root * p.root);
        assert!(p.q0().is_positive());
    }

    #[test]
    fn witness_lifts_to_target_value() {
        let (h, anchors) = subdivided_k4();
        let g = build_gadget(&h, &anchors, Some(8)).unwrap();
        let lifted = witness_to_partition(&g, &witness(&h, &WITNESS)).unwrap();
        for part in lifted.parts().iter().take(4) {
            let st = g.graph.set_stats(part);
            assert_eq!((st.boundary, st.volume), (4, 24));
            assert_eq!(per_unit_deficit(st.boundary, st.volume, 72).unwrap().relation, Threshold::Equal);
        }
        let q = score_partition::<BigInt>(&g.graph, &lifted).unwrap().q;
        assert_eq!(q, g.params.q0());
    }

    #[test]
    fn bad_witnesses_rejected() {
        let (h, anchors) = subdivided_k4();
        let g = build_gadget(&h, &anchors, Some(8)).unwrap();
        let uneven = witness(&h, &[
            &["a1", "s12", "p1", "s13"],
            &["a2", "s23", "p2"],
            &["a3", "s34"],
            &["a4", "s14", "s24"],
        ]);
        assert!(matches!(witness_to_partition(&g, &uneven), Err(Error::InvalidWitness(_))));
        let two_anchors = witness(&h, &[
            &["a1", "s12", "a2"],
            &["p1", "s23", "p2"],
            &["a3", "s13", "s34"],
            &["a4", "s14", "s24"],
        ]);
        assert!(matches!(witness_to_partition(&g, &two_anchors), Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn gadget_minus_anchors_is_caterpillar_forest() {
        let (h, anchors) = subdivided_k4();
        let g = build_gadget(&h, &anchors, Some(8)).unwrap();
        let removed: VertexSet = anchors.iter().copied().collect();
        assert_eq!(caterpillar_violation(&g.graph, &removed), None);
        assert!(caterpillar_violation(&g.graph, &VertexSet::new()).is_some());
    }

    #[test]
    fn symbolic_labels_avoid_collisions() {
        let (h, anchors) = subdivided_k4();
        let g = build_gadget(&h, &anchors, Some(8)).unwrap();
        let mut labels: Vec<&String> = g.graph.labels().iter().collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), g.graph.n());
        assert_eq!(g.graph.label(12), "g12");
    }
}
