use thiserror::Error;

use crate::gadget::AecpViolation;
use crate::treedecomp::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: self-loop on vertex `{label}`")]
    SelfLoop { line: usize, label: String },

    #[error("line {line}: duplicate edge `{u}`-`{v}`")]
    DuplicateEdge { line: usize, u: String, v: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("edgeless graph: q* is 1 by convention, partition scores undefined")]
    Edgeless,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("part index {index} out of range for a partition with {parts} parts")]
    PartIndex { index: usize, parts: usize },

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("state budget exhausted: {states} states stored (cap {cap})")]
    StateBudget { states: usize, cap: usize },

    #[error("connected-subgraph cap exhausted after {found} subgraphs (cap {cap})")]
    SubgraphBudget { found: usize, cap: usize },

    #[error("search budget exhausted after {nodes} nodes")]
    SearchBudget { nodes: u64 },

    #[error("invalid tree decomposition: {}", describe(.0))]
    InvalidDecomposition(Vec<Violation>),

    #[error("vertex set is not a vertex cover: edge {0}-{1} uncovered")]
    NotACover(usize, usize),

    #[error("count assignment infeasible: {0}")]
    InfeasibleCounts(String),

    #[error("invalid AECP instance: {}", describe(.0))]
    InvalidAecp(Vec<AecpViolation>),

    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn describe<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
