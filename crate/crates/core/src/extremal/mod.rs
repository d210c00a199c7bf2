//! Bounds on `L(m, n)`, witness search and exact computation at desk scale.
//!
//! A *witness at cap `k`* is an `m x n` array whose symbols each occur at most
//! `k` times and which has no latin transversal; it proves `L(m, n) <= k - 1`.
//! Exhaustive search walks every grid up to symbol relabeling, encoded as a
//! restricted growth string over the `m * n` cells.

mod bounds;
mod compute;
mod enumerate;
mod lemmas;
mod witness;

pub use bounds::{conjectured_value, theorem_bounds, Bound, LBounds, Provenance};
pub use compute::{
    compute_l, compute_l_with, monotone_table, monotonicity_check, Certificate, LBudget, LResult,
    Status, WitnessSource,
};
pub use enumerate::{bell, restricted_partition_count, RgsEnumerator};
pub use lemmas::{lemma_checks, LemmaOutcome, LemmaReport};
pub use witness::{
    exhaustive_shards, search_shard, witness_search, SearchMode, ShardOutcome, WitnessOutcome,
    WitnessQuery, DEFAULT_CEILING,
};

use crate::solver::SolveError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtremalError {
    #[error("invalid shape {m}x{n}: need 2 <= m <= n")]
    InvalidShape { m: usize, n: usize },
    #[error("multiplicity cap must be at least 1")]
    ZeroCap,
    #[error("exhaustive enumeration of {estimate} grids exceeds the ceiling of {ceiling}")]
    EnumerationTooLarge { estimate: u128, ceiling: u128 },
    #[error("exhaustive enumeration interrupted by the time budget")]
    Interrupted,
    #[error("lemma checks need n >= 4, got {n}")]
    LemmaRange { n: usize },
    #[error("inconsistent result: {0}")]
    InvalidResult(&'static str),
    #[error(transparent)]
    Solve(#[from] SolveError),
}
