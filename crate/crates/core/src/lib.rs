//! Exact modularity maximisation.
//!
//! Every solver works on exact scaled integers: a modularity value on a graph
//! with `m` edges is stored as its numerator over `4m²` (see [`ScaledScore`]).
//! The numerator type is a parameter; [`Score`] (`i128`) is the default and
//! [`BigScore`] covers the hardness gadgets, whose edge counts grow with the
//! square of the input.
//!
//! Solvers:
//! - [`oracle`]: exhaustive search over set partitions.
//! - [`twdp`]: dynamic programming over a nice tree decomposition, exact or
//!   with at most `c` parts.
//! - [`connsub`]: enumeration of connected induced subgraphs plus a split
//!   recurrence.
//! - [`vc`]: enumeration over partitions of a minimum vertex cover.

pub mod connsub;
pub mod corpus;
pub mod error;
pub mod gadget;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod scalar;
pub mod score;
pub mod treedecomp;
pub mod vc;
pub mod twdp;
pub mod vertex_set;

pub use error::{Error, Result};
pub use graph::{tw_degree_lower_bound, Graph, GraphBuilder, SetStats, Stripped};
pub use partition::Partition;
pub use scalar::{ScaledScore, ScoreInt};
pub use score::{deficit, merge_delta, score_partition, Breakdown, Solution};
pub use vertex_set::VertexSet;

/// Default exact score: `i128` numerators.
pub type Score = ScaledScore<i128>;
/// Arbitrary-precision score.
pub type BigScore = ScaledScore<num_bigint::BigInt>;
/// Compact score for graphs with fewer than about 20 000 edges.
pub type Score64 = ScaledScore<i64>;
