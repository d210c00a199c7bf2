//! Latin transversals of rectangular arrays.
//!
//! An `m x n` array (`m <= n`) holds one symbol per cell. A *transversal*
//! picks one cell from each row with no two cells sharing a column; it is
//! *latin* when the picked symbols are pairwise distinct. `L(m, n)` is the
//! largest multiplicity cap `k` such that every `m x n` array whose symbols
//! each occur at most `k` times has a latin transversal.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised as:
//!
//! - [`grid`]: the array model, symmetries and canonical relabeling.
//! - [`solver`]: exact backtracking, counting, greedy, resampling and
//!   maximum-distinct search.
//! - [`constructions`]: Parker and flood arrays, abelian group tables, Hall
//!   arrays, Snevily submatrices and seeded random generators.
//! - [`extremal`]: closed-form bounds, restricted-growth-string enumeration,
//!   witness search, exact computation of `L(m, n)` and lemma checkers.
//!
//! Enable the `std` feature to honor wall-clock time budgets.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod constructions;
pub mod extremal;
pub mod grid;
pub mod rng;
pub mod solver;

pub use constructions::{BSequence, ConstructionError, GroupSpec};
pub use extremal::{LBounds, LResult, Status, WitnessQuery};
pub use grid::{Grid, GridError, MultiplicityProfile, SymbolId, Symmetry, Transversal};
pub use solver::{PartialResult, SearchConfig, SolveError};

mod clock;
