//! Exhaustive witness search sharded over restricted-growth prefixes.
//!
//! Shards are searched concurrently and reduced in prefix order, so the
//! answer (and the first witness) is the same as the serial enumeration for
//! any worker count. The only shared state is the index of the earliest shard
//! known to hold a witness; shards after it are abandoned.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use lt_core::extremal::{
    compute_l_with, exhaustive_shards, search_shard, witness_search, ExtremalError, LBudget,
    LResult, SearchMode, WitnessOutcome, WitnessQuery,
};
use rayon::prelude::*;

/// Prefix length used to split the enumeration.
const SHARD_DEPTH: usize = 7;

pub fn parallel_witness_search(q: &WitnessQuery) -> Result<WitnessOutcome, ExtremalError> {
    if !matches!(q.mode, SearchMode::Exhaustive) {
        return witness_search(q);
    }
    let shards = exhaustive_shards(q, SHARD_DEPTH)?;
    let earliest = AtomicUsize::new(usize::MAX);
    let deadline = q.time_budget.and_then(|d| Instant::now().checked_add(d));
    let expired = || deadline.is_some_and(|d| Instant::now() >= d);

    let outcomes: Vec<_> = shards
        .par_iter()
        .enumerate()
        .map(|(i, prefix)| {
            if earliest.load(Ordering::Relaxed) < i {
                return None;
            }
            let mut ticks = 0u32;
            let out = search_shard(q, prefix, &mut || {
                ticks = ticks.wrapping_add(1);
                ticks.is_multiple_of(1024) && (earliest.load(Ordering::Relaxed) < i || expired())
            });
            if out.witness.is_some() {
                earliest.fetch_min(i, Ordering::Relaxed);
            }
            Some(out)
        })
        .collect();

    let mut examined = 0;
    for out in outcomes {
        // Shards after the earliest witness are the only ones skipped or cut
        // for that reason, and the loop returns before reaching them.
        let Some(out) = out else { break };
        if out.stopped && out.witness.is_none() {
            return Err(ExtremalError::Interrupted);
        }
        examined += out.examined;
        if out.witness.is_some() {
            return Ok(WitnessOutcome {
                witness: out.witness,
                examined,
            });
        }
    }
    Ok(WitnessOutcome {
        witness: None,
        examined,
    })
}

/// `compute_l` backed by the parallel exhaustive search.
pub fn compute_l_parallel(m: usize, n: usize, budget: &LBudget) -> Result<LResult, ExtremalError> {
    compute_l_with(m, n, budget, &mut parallel_witness_search)
}

/// Worker count from `LT_WORKERS`, if set to a positive integer.
pub fn workers_from_env() -> Option<usize> {
    std::env::var("LT_WORKERS")
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}
