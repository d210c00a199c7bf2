//! Finding, counting and approximating latin transversals.
//!
//! The exact search is a depth-first backtracker that always branches on the
//! unassigned row with the fewest feasible cells (lowest index on ties) and
//! tries that row's cells left to right. Feasibility is tracked with a
//! used-column bitmask and a used-symbol table, so exact search is limited to
//! grids of at most [`MAX_SEARCH_COLS`] columns.

use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::clock::Deadline;
use crate::grid::{Grid, SymbolId, Transversal};
use crate::rng;

/// Widest grid the bitmask search accepts.
pub const MAX_SEARCH_COLS: usize = 64;

const CLOCK_STRIDE: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("transversal search needs rows <= cols, got {rows}x{cols}")]
    TooManyRows { rows: usize, cols: usize },
    #[error("exact search supports at most {MAX_SEARCH_COLS} columns, got {cols}")]
    TooWide { cols: usize },
    #[error("resampling needs a square grid, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("row order is not a permutation of 0..{rows}")]
    InvalidRowOrder { rows: usize },
    /// The node or time budget ran out before the search reached a verdict.
    #[error("search budget exhausted after {nodes} nodes without a verdict")]
    BudgetExhausted { nodes: u64 },
}

/// Budgets and seed shared by the finders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum search nodes; 0 means unlimited.
    pub node_budget: u64,
    pub seed: u64,
    /// Resampling steps allowed after the initial permutation.
    pub max_iters: u64,
    /// Wall-clock budget, honored only with the `std` feature.
    pub time_budget: Option<Duration>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 0,
            seed: 0,
            max_iters: 100_000,
            time_budget: None,
        }
    }
}

/// Best transversal found by [`max_distinct_transversal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialResult {
    pub best: Transversal,
    /// Number of distinct symbols on `best`.
    pub distinct: usize,
    /// Set when the search proved no transversal has more distinct symbols.
    pub optimal: bool,
}

/// Result of [`resample_find`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResampleOutcome {
    /// `None` means the resampler gave up, not that no transversal exists.
    pub transversal: Option<Transversal>,
    pub steps: u64,
}

fn check_shape(g: &Grid) -> Result<(), SolveError> {
    if g.rows() > g.cols() {
        return Err(SolveError::TooManyRows {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    Ok(())
}

fn check_exact(g: &Grid) -> Result<(), SolveError> {
    check_shape(g)?;
    if g.cols() > MAX_SEARCH_COLS {
        return Err(SolveError::TooWide { cols: g.cols() });
    }
    Ok(())
}

/// Exact search for a latin transversal.
///
/// Returns `Ok(None)` only after exhausting the search space; a budget that
/// runs out first yields [`SolveError::BudgetExhausted`].
pub fn find_transversal(g: &Grid, cfg: &SearchConfig) -> Result<Option<Transversal>, SolveError> {
    check_exact(g)?;
    let mut s = Searcher::default();
    s.load(g.rows(), g.cols(), g.cells(), g.num_symbols());
    s.find(cfg.node_budget, Deadline::after(cfg.time_budget))
}

/// Exact number of latin transversals.
pub fn count_transversals(g: &Grid) -> Result<u64, SolveError> {
    check_exact(g)?;
    let mut s = Searcher::default();
    s.load(g.rows(), g.cols(), g.cells(), g.num_symbols());
    Ok(s.count())
}

/// Row-by-row first fit: each row in `row_order` takes its leftmost cell whose
/// column and symbol are both unused.
///
/// Always succeeds when `(rows - 1) * max_mult <= cols - 1`.
pub fn greedy_find(g: &Grid, row_order: &[usize]) -> Result<Option<Transversal>, SolveError> {
    check_shape(g)?;
    let m = g.rows();
    let mut seen = vec![false; m];
    if row_order.len() != m
        || row_order
            .iter()
            .any(|&r| r >= m || core::mem::replace(&mut seen[r], true))
    {
        return Err(SolveError::InvalidRowOrder { rows: m });
    }
    let mut used_col = vec![false; g.cols()];
    let mut used_sym = vec![false; g.num_symbols()];
    let mut columns = vec![0; m];
    for &r in row_order {
        let Some(c) = (0..g.cols()).find(|&c| !used_col[c] && !used_sym[g.get(r, c) as usize])
        else {
            return Ok(None);
        };
        used_col[c] = true;
        used_sym[g.get(r, c) as usize] = true;
        columns[r] = c;
    }
    Ok(Some(Transversal::new(columns)))
}

/// Randomized conflict resampling on a square grid.
///
/// Starts from a uniformly random column permutation. While two rows pick the
/// same symbol, a colliding row pair is chosen uniformly and the two rows
/// exchange columns. Gives up after `cfg.max_iters` exchanges.
pub fn resample_find(g: &Grid, cfg: &SearchConfig) -> Result<ResampleOutcome, SolveError> {
    let n = g.rows();
    if g.cols() != n {
        return Err(SolveError::NotSquare {
            rows: n,
            cols: g.cols(),
        });
    }
    let mut rng = rng::seeded(cfg.seed);
    let deadline = Deadline::after(cfg.time_budget);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);

    let mut rows_of: Vec<Vec<usize>> = vec![Vec::new(); g.num_symbols()];
    let mut touched: Vec<SymbolId> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut steps = 0;
    loop {
        for &s in &touched {
            rows_of[s as usize].clear();
        }
        touched.clear();
        for (r, &c) in perm.iter().enumerate() {
            let s = g.get(r, c);
            if rows_of[s as usize].is_empty() {
                touched.push(s);
            }
            rows_of[s as usize].push(r);
        }
        pairs.clear();
        for &s in &touched {
            let rs = &rows_of[s as usize];
            for i in 0..rs.len() {
                for j in i + 1..rs.len() {
                    pairs.push((rs[i], rs[j]));
                }
            }
        }
        if pairs.is_empty() {
            return Ok(ResampleOutcome {
                transversal: Some(Transversal::new(perm)),
                steps,
            });
        }
        if steps >= cfg.max_iters || (steps % 256 == 0 && deadline.expired()) {
            return Ok(ResampleOutcome {
                transversal: None,
                steps,
            });
        }
        let (a, b) = pairs[rng.gen_range(0..pairs.len())];
        perm.swap(a, b);
        steps += 1;
    }
}

/// Branch and bound for a transversal with the most distinct symbols.
///
/// `optimal` is cleared when the node or time budget stops the search early.
pub fn max_distinct_transversal(g: &Grid, cfg: &SearchConfig) -> Result<PartialResult, SolveError> {
    check_shape(g)?;
    let m = g.rows();
    let mut bb = Distinct {
        g,
        limit: m.min(g.num_symbols()),
        used_col: vec![false; g.cols()],
        count: vec![0; g.num_symbols()],
        current: vec![0; m],
        best: Vec::new(),
        best_distinct: 0,
        nodes: 0,
        budget: cfg.node_budget,
        deadline: Deadline::after(cfg.time_budget),
        aborted: false,
    };
    bb.dfs(0, 0);
    Ok(PartialResult {
        best: Transversal::new(bb.best),
        distinct: bb.best_distinct,
        optimal: !bb.aborted,
    })
}

struct Distinct<'a> {
    g: &'a Grid,
    limit: usize,
    used_col: Vec<bool>,
    count: Vec<u32>,
    current: Vec<usize>,
    best: Vec<usize>,
    best_distinct: usize,
    nodes: u64,
    budget: u64,
    deadline: Deadline,
    aborted: bool,
}

impl Distinct<'_> {
    /// Returns true when the search must stop (budget or proven optimum).
    fn dfs(&mut self, row: usize, distinct: usize) -> bool {
        let m = self.g.rows();
        if row == m {
            if distinct > self.best_distinct || self.best.is_empty() {
                self.best_distinct = distinct;
                self.best = self.current.clone();
            }
            return self.best_distinct == self.limit;
        }
        if !self.best.is_empty() && (distinct + (m - row)).min(self.limit) <= self.best_distinct {
            return false;
        }
        // New symbols first, then repeats.
        for fresh in [true, false] {
            for c in 0..self.g.cols() {
                if self.used_col[c] {
                    continue;
                }
                let s = self.g.get(row, c) as usize;
                if (self.count[s] == 0) != fresh {
                    continue;
                }
                self.nodes += 1;
                if (self.budget != 0 && self.nodes > self.budget)
                    || (self.nodes.is_multiple_of(CLOCK_STRIDE) && self.deadline.expired())
                {
                    // Keep any complete transversal found so far.
                    if !self.best.is_empty() {
                        self.aborted = true;
                        return true;
                    }
                }
                self.used_col[c] = true;
                self.count[s] += 1;
                self.current[row] = c;
                let stop = self.dfs(row + 1, distinct + usize::from(fresh));
                self.count[s] -= 1;
                self.used_col[c] = false;
                if stop {
                    return true;
                }
            }
        }
        false
    }
}

enum Flow {
    Continue,
    Found,
    Abort,
}

/// Reusable exact backtracker over a raw row-major cell slice.
#[derive(Debug, Default)]
pub(crate) struct Searcher {
    rows: usize,
    cols: usize,
    cells: Vec<SymbolId>,
    /// `entries[starts[r]..starts[r + 1]]` lists `(symbol, column mask)` for
    /// every symbol present in row `r`.
    starts: Vec<usize>,
    entries: Vec<(SymbolId, u64)>,
    slot: Vec<usize>,
    used_sym: Vec<bool>,
    used_cols: u64,
    choice: Vec<usize>,
    count: u64,
    counting: bool,
    nodes: u64,
    budget: u64,
    deadline: Option<Deadline>,
}

impl Searcher {
    /// Requires `rows <= cols <= MAX_SEARCH_COLS` and ids below `num_symbols`.
    pub(crate) fn load(
        &mut self,
        rows: usize,
        cols: usize,
        cells: &[SymbolId],
        num_symbols: usize,
    ) {
        debug_assert!(rows <= cols && cols <= MAX_SEARCH_COLS);
        self.rows = rows;
        self.cols = cols;
        self.cells.clear();
        self.cells.extend_from_slice(cells);
        self.starts.clear();
        self.entries.clear();
        self.slot.clear();
        self.slot.resize(num_symbols, usize::MAX);
        for r in 0..rows {
            let start = self.entries.len();
            self.starts.push(start);
            for c in 0..cols {
                let s = cells[r * cols + c];
                let slot = self.slot[s as usize];
                if slot != usize::MAX && slot >= start {
                    self.entries[slot].1 |= 1 << c;
                } else {
                    self.slot[s as usize] = self.entries.len();
                    self.entries.push((s, 1 << c));
                }
            }
        }
        self.starts.push(self.entries.len());
        self.used_sym.clear();
        self.used_sym.resize(num_symbols, false);
        self.choice.clear();
        self.choice.resize(rows, 0);
    }

    fn reset(&mut self, counting: bool, budget: u64, deadline: Option<Deadline>) {
        self.used_cols = 0;
        self.used_sym.fill(false);
        self.count = 0;
        self.counting = counting;
        self.nodes = 0;
        self.budget = budget;
        self.deadline = deadline;
    }

    pub(crate) fn find(
        &mut self,
        budget: u64,
        deadline: Deadline,
    ) -> Result<Option<Transversal>, SolveError> {
        self.reset(false, budget, Some(deadline));
        match self.dfs(0, 0) {
            Flow::Found => Ok(Some(Transversal::new(self.choice.clone()))),
            Flow::Continue => Ok(None),
            Flow::Abort => Err(SolveError::BudgetExhausted { nodes: self.nodes }),
        }
    }

    /// Unbounded existence check.
    pub(crate) fn exists(&mut self) -> bool {
        self.reset(false, 0, None);
        matches!(self.dfs(0, 0), Flow::Found)
    }

    pub(crate) fn count(&mut self) -> u64 {
        self.reset(true, 0, None);
        self.dfs(0, 0);
        self.count
    }

    fn feasible(&self, r: usize) -> u64 {
        let mut acc = 0;
        for &(s, mask) in &self.entries[self.starts[r]..self.starts[r + 1]] {
            if !self.used_sym[s as usize] {
                acc |= mask;
            }
        }
        acc & !self.used_cols
    }

    fn dfs(&mut self, assigned: u64, depth: usize) -> Flow {
        if depth == self.rows {
            if self.counting {
                self.count += 1;
                return Flow::Continue;
            }
            return Flow::Found;
        }
        let mut row = usize::MAX;
        let mut row_mask = 0;
        let mut fewest = u32::MAX;
        for r in 0..self.rows {
            if assigned & (1 << r) != 0 {
                continue;
            }
            let mask = self.feasible(r);
            let pop = mask.count_ones();
            if pop == 0 {
                return Flow::Continue;
            }
            if pop < fewest {
                fewest = pop;
                row = r;
                row_mask = mask;
            }
        }
        let mut rest = row_mask;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.nodes += 1;
            if self.budget != 0 && self.nodes > self.budget {
                return Flow::Abort;
            }
            if self.nodes.is_multiple_of(CLOCK_STRIDE) && self.deadline.is_some_and(|d| d.expired())
            {
                return Flow::Abort;
            }
            let s = self.cells[row * self.cols + c] as usize;
            self.used_cols |= 1 << c;
            self.used_sym[s] = true;
            self.choice[row] = c;
            let flow = self.dfs(assigned | (1 << row), depth + 1);
            self.used_cols &= !(1 << c);
            self.used_sym[s] = false;
            if !matches!(flow, Flow::Continue) {
                return flow;
            }
        }
        Flow::Continue
    }
}
