//! The `(θ, φ)` route to a cover partition's optimum: for every reachable
//! pair of the two linear terms keep the smallest quadratic term `ψ`, then
//! maximise over pairs. Each pair is an integer quadratic program; the data
//! of that program is built by [`iqp_instance`]. Here the minimum `ψ` per
//! pair is found by exhaustive enumeration, so this path is a cross-check
//! for small instances rather than a solver.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{objective_terms, CountAssignment, CoverInstance, CoverPartition};
use crate::error::{Error, Result};
use crate::scalar::{ScaledScore, ScoreInt};

/// `min xᵀQx` subject to `Ax ≤ b`, with `x` indexed by `i·2^k + σ` for part
/// `i` and type `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iqp {
    pub k: usize,
    pub parts: usize,
    pub q: Vec<Vec<i64>>,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
}

const MAX_IQP_VARIABLES: usize = 4096;

impl Iqp {
    pub fn variables(&self) -> usize {
        self.parts << self.k
    }

    /// The variable vector of a count assignment.
    pub fn vector(&self, inst: &CoverInstance, x: &CountAssignment) -> Vec<i64> {
        let mut v = vec![0; self.variables()];
        for (row, &(sigma, _)) in x.x.iter().zip(inst.counts()) {
            for (i, &c) in row.iter().enumerate().take(self.parts) {
                v[(i << self.k) + sigma as usize] = c as i64;
            }
        }
        v
    }

    pub fn feasible(&self, v: &[i64]) -> bool {
        self.a
            .iter()
            .zip(&self.b)
            .all(|(row, &b)| row.iter().zip(v).map(|(a, x)| a * x).sum::<i64>() <= b)
    }

    pub fn objective(&self, v: &[i64]) -> i64 {
        self.q
            .iter()
            .zip(v)
            .map(|(row, &xi)| xi * row.iter().zip(v).map(|(q, xj)| q * xj).sum::<i64>())
            .sum()
    }

    /// Largest absolute entry of `Q` and `A`.
    pub fn max_entry(&self) -> i64 {
        self.q.iter().chain(&self.a).flatten().map(|e| e.abs()).max().unwrap_or(0)
    }
}

/// Program whose optimum is the smallest `ψ` over assignments with `θ = y`
/// and `φ = z`. Equalities become two inequalities each; non-negativity is
/// one row per variable.
pub fn iqp_instance(inst: &CoverInstance, p: &CoverPartition, y: u64, z: u64) -> Result<Iqp> {
    let k = inst.k();
    let parts = p.len();
    let vars = parts.checked_shl(k as u32).filter(|&v| v <= MAX_IQP_VARIABLES).ok_or(
        Error::CapExceeded {
            what: "program variables",
            size: parts.saturating_mul(1 << k.min(60)),
            cap: MAX_IQP_VARIABLES,
        },
    )?;
    let types = 1usize << k;
    let deg = |var: usize| ((var % types) as u32).count_ones() as i64;
    let part = |var: usize| var / types;
    let q = (0..vars)
        .map(|r| {
            (0..vars)
                .map(|c| if part(r) == part(c) { deg(r) * deg(c) } else { 0 })
                .collect()
        })
        .collect();
    let theta_row: Vec<i64> = (0..vars)
        .map(|v| ((v % types) as u32 & p.pi(part(v))).count_ones() as i64)
        .collect();
    let phi_row: Vec<i64> = (0..vars)
        .map(|v| p.volume(part(v)) as i64 * deg(v))
        .collect();
    let neg = |row: &[i64]| row.iter().map(|x| -x).collect::<Vec<_>>();
    let mut a = vec![theta_row.clone(), neg(&theta_row), phi_row.clone(), neg(&phi_row)];
    let mut b = vec![y as i64, -(y as i64), z as i64, -(z as i64)];
    for sigma in 0..types {
        let row: Vec<i64> = (0..vars).map(|v| i64::from(v % types == sigma)).collect();
        let count = inst.count(sigma as u32) as i64;
        a.push(neg(&row));
        b.push(-count);
        a.push(row);
        b.push(count);
    }
    for v in 0..vars {
        let mut row = vec![0; vars];
        row[v] = -1;
        a.push(row);
        b.push(0);
    }
    Ok(Iqp {
        k,
        parts,
        q,
        a,
        b,
    })
}

#[derive(Clone, Debug)]
pub struct YzReport<S: ScoreInt> {
    /// Smallest `ψ` per reachable `(θ, φ)`, with a witness.
    pub pairs: BTreeMap<(u64, u64), (u64, CountAssignment)>,
    pub best: ScaledScore<S>,
    pub best_x: CountAssignment,
    /// Assignments enumerated.
    pub assignments: u64,
}

/// Exhaustive `(θ, φ)` table for one cover partition.
pub fn yz_optimize<S: ScoreInt>(inst: &CoverInstance, p: &CoverPartition, cap: u64) -> Result<YzReport<S>> {
    let mut x = CountAssignment::zeros(inst, p.len());
    let mut pairs: BTreeMap<(u64, u64), (u64, CountAssignment)> = BTreeMap::new();
    let mut assignments = 0;
    let mut constant = None;
    enumerate(inst, p, 0, 0, inst.counts().first().map_or(0, |c| c.1), &mut x, &mut |x| {
        assignments += 1;
        if assignments > cap {
            return Err(Error::SearchBudget { nodes: assignments });
        }
        let t = objective_terms(inst, p, x)?;
        constant = Some(t.constant);
        let slot = pairs.entry((t.theta, t.phi)).or_insert((t.psi, x.clone()));
        if t.psi < slot.0 {
            *slot = (t.psi, x.clone());
        }
        Ok(())
    })?;
    let constant = constant.expect("at least one assignment exists");
    let four_m = 4 * inst.m() as i128;
    let value = |&(theta, phi): &(u64, u64), psi: u64| {
        constant + four_m * theta as i128 - 2 * phi as i128 - psi as i128
    };
    let (key, (psi, best_x)) = pairs
        .iter()
        .fold(None::<(&(u64, u64), &(u64, CountAssignment))>, |acc, (k, v)| match acc {
            Some((bk, bv)) if value(bk, bv.0) >= value(k, v.0) => Some((bk, bv)),
            _ => Some((k, v)),
        })
        .unwrap();
    let num = S::from_big(&BigInt::from(value(key, *psi))).expect("score fits");
    Ok(YzReport {
        best: ScaledScore::new(num, inst.m()),
        best_x: best_x.clone(),
        pairs,
        assignments,
    })
}

type Visit<'a> = dyn FnMut(&CountAssignment) -> Result<()> + 'a;

fn enumerate(
    inst: &CoverInstance,
    p: &CoverPartition,
    t: usize,
    i: usize,
    r: u64,
    x: &mut CountAssignment,
    visit: &mut Visit<'_>,
) -> Result<()> {
    if t == inst.counts().len() {
        return visit(x);
    }
    let next = |t: usize| inst.counts().get(t).map_or(0, |c| c.1);
    if i + 1 == p.len() {
        x.x[t][i] = r;
        let res = enumerate(inst, p, t + 1, 0, next(t + 1), x, visit);
        x.x[t][i] = 0;
        return res;
    }
    for take in 0..=r {
        x.x[t][i] = take;
        enumerate(inst, p, t, i + 1, r - take, x, visit)?;
    }
    x.x[t][i] = 0;
    Ok(())
}
