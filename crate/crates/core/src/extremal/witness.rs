use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;
use core::time::Duration;

use super::enumerate::RgsEnumerator;
use super::ExtremalError;
use crate::clock::Deadline;
use crate::constructions::random_grid;
use crate::grid::{rgs_relabel, Grid, SymbolId};
use crate::rng::trial_seed;
use crate::solver::{Searcher, MAX_SEARCH_COLS};

/// Default ceiling on the number of grids an exhaustive search may visit.
pub const DEFAULT_CEILING: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Every grid up to relabeling with all blocks of size at most `k`.
    Exhaustive,
    /// `trials` seeded random grids with multiplicity cap `k`.
    Randomized { trials: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessQuery {
    pub m: usize,
    pub n: usize,
    /// Multiplicity cap.
    pub k: usize,
    pub mode: SearchMode,
    pub seed: u64,
    /// Refuse exhaustive runs whose grid count exceeds this.
    pub ceiling: u128,
    /// Skip grids that are not minimal under row, column and relabel
    /// symmetry. Sound, and typically slower than solving every grid.
    pub full_canonical: bool,
    pub time_budget: Option<Duration>,
}

impl WitnessQuery {
    pub fn exhaustive(m: usize, n: usize, k: usize) -> Self {
        WitnessQuery {
            m,
            n,
            k,
            mode: SearchMode::Exhaustive,
            seed: 0,
            ceiling: DEFAULT_CEILING,
            full_canonical: false,
            time_budget: None,
        }
    }

    pub fn randomized(m: usize, n: usize, k: usize, trials: u64, seed: u64) -> Self {
        WitnessQuery {
            mode: SearchMode::Randomized { trials },
            seed,
            ..Self::exhaustive(m, n, k)
        }
    }

    fn validate(&self) -> Result<(), ExtremalError> {
        if self.m == 0 || self.m > self.n || self.n > MAX_SEARCH_COLS {
            return Err(ExtremalError::InvalidShape {
                m: self.m,
                n: self.n,
            });
        }
        if self.k == 0 {
            return Err(ExtremalError::ZeroCap);
        }
        Ok(())
    }

    fn enumerator(&self) -> RgsEnumerator {
        RgsEnumerator::new(self.m * self.n, self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessOutcome {
    /// A grid with multiplicity at most `k` and no latin transversal.
    pub witness: Option<Grid>,
    /// Grids generated (exhaustive) or trials run (randomized).
    pub examined: u64,
}

/// Result of searching the completions of one prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShardOutcome {
    pub witness: Option<Grid>,
    /// Grids visited up to and including the witness, or the whole shard.
    pub examined: u64,
    /// The `stop` callback cut the shard short.
    pub stopped: bool,
}

/// Searches for a witness at cap `q.k`.
///
/// Exhaustive mode returns the first witness in lexicographic
/// restricted-growth order, or `None` after the complete enumeration.
/// Randomized mode returns `None` when no trial produced a witness, which
/// proves nothing.
pub fn witness_search(q: &WitnessQuery) -> Result<WitnessOutcome, ExtremalError> {
    q.validate()?;
    match q.mode {
        SearchMode::Exhaustive => {
            check_ceiling(q)?;
            let deadline = Deadline::after(q.time_budget);
            let mut ticks = 0u32;
            let out = search_shard(q, &[], &mut || {
                ticks = ticks.wrapping_add(1);
                ticks.is_multiple_of(4096) && deadline.expired()
            });
            if out.stopped {
                return Err(ExtremalError::Interrupted);
            }
            Ok(WitnessOutcome {
                witness: out.witness,
                examined: out.examined,
            })
        }
        SearchMode::Randomized { trials } => {
            let deadline = Deadline::after(q.time_budget);
            let mut searcher = Searcher::default();
            for i in 0..trials {
                if i % 64 == 0 && i > 0 && deadline.expired() {
                    return Ok(WitnessOutcome {
                        witness: None,
                        examined: i,
                    });
                }
                let g = random_grid(q.m, q.n, q.k, trial_seed(q.seed, i))
                    .expect("validated query has a positive cap");
                searcher.load(q.m, q.n, g.cells(), g.num_symbols());
                if !searcher.exists() {
                    return Ok(WitnessOutcome {
                        witness: Some(g),
                        examined: i + 1,
                    });
                }
            }
            Ok(WitnessOutcome {
                witness: None,
                examined: trials,
            })
        }
    }
}

fn check_ceiling(q: &WitnessQuery) -> Result<(), ExtremalError> {
    let estimate = q.enumerator().count();
    if estimate > q.ceiling {
        return Err(ExtremalError::EnumerationTooLarge {
            estimate,
            ceiling: q.ceiling,
        });
    }
    Ok(())
}

/// Enumeration prefixes of length `depth` for parallel exhaustive search, in
/// the order their shards must be reduced. Fails like [`witness_search`] when
/// the enumeration exceeds the ceiling.
pub fn exhaustive_shards(
    q: &WitnessQuery,
    depth: usize,
) -> Result<Vec<Vec<SymbolId>>, ExtremalError> {
    q.validate()?;
    check_ceiling(q)?;
    Ok(q.enumerator().prefixes(depth))
}

/// Exhaustively searches the completions of `prefix` in lexicographic order.
/// `stop` is polled once per grid; returning true abandons the shard.
pub fn search_shard(
    q: &WitnessQuery,
    prefix: &[SymbolId],
    stop: &mut dyn FnMut() -> bool,
) -> ShardOutcome {
    let mut searcher = Searcher::default();
    let mut canon = q.full_canonical.then(|| Canonicalizer::new(q.m, q.n));
    let mut examined = 0u64;
    let mut stopped = false;
    let (m, n) = (q.m, q.n);
    let flow = q.enumerator().for_each_with_prefix(prefix, |cells| {
        if stop() {
            stopped = true;
            return ControlFlow::Break(None);
        }
        examined += 1;
        if let Some(c) = canon.as_mut() {
            if !c.is_minimal(cells) {
                return ControlFlow::Continue(());
            }
        }
        let symbols = cells.iter().copied().max().map_or(0, |s| s as usize + 1);
        searcher.load(m, n, cells, symbols);
        if searcher.exists() {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(Some(
                Grid::from_symbols(m, n, cells.to_vec()).expect("valid rgs"),
            ))
        }
    });
    let witness = match flow {
        ControlFlow::Break(w) => w,
        ControlFlow::Continue(()) => None,
    };
    ShardOutcome {
        witness,
        examined,
        stopped,
    }
}

/// Tests whether a restricted growth string is the lexicographically least
/// member of its orbit under row permutations, column permutations and
/// relabeling.
struct Canonicalizer {
    m: usize,
    n: usize,
    row_perms: Vec<Vec<usize>>,
    col_perms: Vec<Vec<usize>>,
    buf: Vec<SymbolId>,
    scratch: Vec<SymbolId>,
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

impl Canonicalizer {
    fn new(m: usize, n: usize) -> Self {
        Canonicalizer {
            m,
            n,
            row_perms: permutations(m),
            col_perms: permutations(n),
            buf: vec![0; m * n],
            scratch: Vec::new(),
        }
    }

    fn is_minimal(&mut self, cells: &[SymbolId]) -> bool {
        let (m, n) = (self.m, self.n);
        for rp in &self.row_perms {
            for cp in &self.col_perms {
                for r in 0..m {
                    for c in 0..n {
                        self.buf[rp[r] * n + cp[c]] = cells[r * n + c];
                    }
                }
                rgs_relabel(&mut self.buf, &mut self.scratch);
                if self.buf.as_slice() < cells {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{count_transversals, find_transversal, SearchConfig};

    #[test]
    fn three_by_three() {
        let out = witness_search(&WitnessQuery::exhaustive(3, 3, 2)).unwrap();
        assert_eq!(out.witness, None);
        assert_eq!(out.examined as u128, RgsEnumerator::new(9, 2).count());

        let w = witness_search(&WitnessQuery::exhaustive(3, 3, 3))
            .unwrap()
            .witness
            .unwrap();
        assert!(w.multiplicities().max_mult <= 3);
        assert_eq!(count_transversals(&w), Ok(0));
    }

    #[test]
    fn two_by_two_first_witness() {
        let w = witness_search(&WitnessQuery::exhaustive(2, 2, 2))
            .unwrap()
            .witness
            .unwrap();
        assert_eq!(w.cells(), &[0, 1, 1, 0]);
        let w = witness_search(&WitnessQuery::exhaustive(2, 2, 4))
            .unwrap()
            .witness
            .unwrap();
        assert_eq!(w.cells(), &[0, 0, 0, 0]);
    }

    #[test]
    fn witnesses_persist_at_higher_caps() {
        for (m, n) in [(2, 2), (2, 3), (3, 3)] {
            let mut found_at = None;
            for k in 1..=m * n {
                let w = witness_search(&WitnessQuery::exhaustive(m, n, k))
                    .unwrap()
                    .witness;
                if let Some(w) = w {
                    found_at.get_or_insert(k);
                    assert_eq!(find_transversal(&w, &SearchConfig::default()), Ok(None));
                    assert!(w.multiplicities().max_mult <= k);
                } else {
                    assert!(found_at.is_none(), "witness vanished at ({m},{n}) cap {k}");
                }
            }
            assert!(found_at.is_some());
        }
    }

    #[test]
    fn full_canonical_prune_agrees() {
        for (m, n) in [(2, 2), (2, 3), (2, 4), (3, 3)] {
            for k in 1..=m * n {
                let plain = WitnessQuery::exhaustive(m, n, k);
                let pruned = WitnessQuery {
                    full_canonical: true,
                    ..plain.clone()
                };
                let a = witness_search(&plain).unwrap();
                let b = witness_search(&pruned).unwrap();
                assert_eq!(a.witness, b.witness, "({m},{n}) cap {k}");
            }
        }
    }

    #[test]
    fn ceiling_is_enforced() {
        let q = WitnessQuery {
            ceiling: 1000,
            ..WitnessQuery::exhaustive(3, 4, 3)
        };
        assert!(matches!(
            witness_search(&q),
            Err(ExtremalError::EnumerationTooLarge { .. })
        ));
        let q = WitnessQuery::exhaustive(4, 4, 3);
        assert!(matches!(
            witness_search(&q),
            Err(ExtremalError::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn query_validation() {
        assert_eq!(
            witness_search(&WitnessQuery::exhaustive(3, 3, 0)),
            Err(ExtremalError::ZeroCap)
        );
        assert!(witness_search(&WitnessQuery::exhaustive(3, 2, 1)).is_err());
    }

    #[test]
    fn randomized_mode() {
        let clean = witness_search(&WitnessQuery::randomized(3, 5, 7, 300, 1)).unwrap();
        assert_eq!(
            clean,
            WitnessOutcome {
                witness: None,
                examined: 300
            }
        );
        // Cap equal to the cell count: random grids often have few symbols.
        let hit = witness_search(&WitnessQuery::randomized(2, 2, 4, 500, 1)).unwrap();
        let w = hit.witness.unwrap();
        assert_eq!(count_transversals(&w), Ok(0));
    }

    #[test]
    fn shards_reproduce_serial_first_witness() {
        let q = WitnessQuery::exhaustive(3, 3, 3);
        let serial = witness_search(&q).unwrap().witness;
        let mut first = None;
        for p in exhaustive_shards(&q, 4).unwrap() {
            if let Some(w) = search_shard(&q, &p, &mut || false).witness {
                first = Some(w);
                break;
            }
        }
        assert_eq!(first, serial);
    }
}
