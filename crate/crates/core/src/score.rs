//! Exact modularity of a given partition.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::scalar::{ScaledScore, ScoreInt};

/// Modularity of a partition split into edge contribution and degree tax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakdown<S: ScoreInt> {
    pub q: ScaledScore<S>,
    /// `q^E = (1/m)·Σ e(A)`.
    pub coverage: ScaledScore<S>,
    /// `q^D = (1/4m²)·Σ vol(A)²`.
    pub degree_tax: ScaledScore<S>,
}

/// An optimum found by one of the solvers.
#[derive(Clone, Debug)]
pub struct Solution<S: ScoreInt> {
    pub q: ScaledScore<S>,
    pub partition: Partition,
}

fn check(g: &Graph, p: &Partition) -> Result<u64> {
    if p.n() != g.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} vertices, graph has {}",
            p.n(),
            g.n()
        )));
    }
    match g.m() {
        0 => Err(Error::Edgeless),
        m => Ok(m),
    }
}

pub fn score_partition<S: ScoreInt>(g: &Graph, p: &Partition) -> Result<Breakdown<S>> {
    let m = check(g, p)?;
    let mut internal = S::zero();
    let mut squares = S::zero();
    for part in p.parts() {
        let st = g.set_stats(part);
        internal = internal + S::from_u(st.internal);
        squares = squares + S::from_u(st.volume) * S::from_u(st.volume);
    }
    let coverage = ScaledScore::new(S::from_u(4) * S::from_u(m) * internal, m);
    let degree_tax = ScaledScore::new(squares, m);
    Ok(Breakdown {
        q: coverage.clone() - degree_tax.clone(),
        coverage,
        degree_tax,
    })
}

/// `1 − q`, computed from boundaries: `4m²·q̃ = Σ (2m·∂(A) + vol(A)²)`.
pub fn deficit<S: ScoreInt>(g: &Graph, p: &Partition) -> Result<ScaledScore<S>> {
    let m = check(g, p)?;
    let total = p.parts().iter().fold(S::zero(), |acc, part| {
        let st = g.set_stats(part);
        acc + S::from_u(2 * m) * S::from_u(st.boundary) + S::from_u(st.volume) * S::from_u(st.volume)
    });
    Ok(ScaledScore::new(total, m))
}

/// Change in modularity from merging parts `i` and `j`:
/// `4m²·Δ = 4m·e(A_i, A_j) − 2·vol(A_i)·vol(A_j)`.
pub fn merge_delta<S: ScoreInt>(
    g: &Graph,
    p: &Partition,
    i: usize,
    j: usize,
) -> Result<ScaledScore<S>> {
    let m = check(g, p)?;
    for idx in [i, j] {
        if idx >= p.len() {
            return Err(Error::PartIndex {
                index: idx,
                parts: p.len(),
            });
        }
    }
    if i == j {
        return Err(Error::InvalidArgument("cannot merge a part with itself".into()));
    }
    let (a, b) = (&p.parts()[i], &p.parts()[j]);
    let cross = g.edges_between(a, b);
    let (va, vb) = (g.set_stats(a).volume, g.set_stats(b).volume);
    let num = S::from_u(4 * m) * S::from_u(cross) - S::from_u(2) * S::from_u(va) * S::from_u(vb);
    Ok(ScaledScore::new(num, m))
}
