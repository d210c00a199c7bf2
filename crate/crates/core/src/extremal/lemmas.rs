use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use super::enumerate::RgsEnumerator;
use super::ExtremalError;
use crate::grid::Grid;
use crate::solver::Searcher;

/// Counterexamples kept per lemma; the counts keep going past this.
const MAX_KEPT: usize = 16;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaOutcome {
    /// Grids satisfying the lemma's hypotheses without a latin transversal.
    pub checked: u64,
    pub violations: u64,
    /// The first few violating grids.
    pub counterexamples: Vec<Grid>,
}

impl LemmaOutcome {
    fn record(&mut self, holds: bool, n: usize, cells: &[u32]) {
        self.checked += 1;
        if !holds {
            self.violations += 1;
            if self.counterexamples.len() < MAX_KEPT {
                self.counterexamples
                    .push(Grid::from_symbols(3, n, cells.to_vec()).expect("valid rgs"));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub n: usize,
    /// Grids enumerated (all `3 x n` grids up to relabeling).
    pub enumerated: u64,
    /// Pinned configuration: `y` at (0,0), `x` at (1,1), two distinct symbols
    /// at (2,2) and (2,3), with `x` equal to one of them. Without a latin
    /// transversal `y` must also equal one of them.
    pub pinned_configuration: LemmaOutcome,
    /// Some symbol occurs at most three times. Without a latin transversal
    /// some symbol occurs at least `2n - 2` times.
    pub rare_symbol: LemmaOutcome,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.pinned_configuration.violations == 0 && self.rare_symbol.violations == 0
    }
}

/// Exhaustively checks both `3 x n` lemmas over every grid up to relabeling.
/// Needs `n >= 4`; `n = 4` (Bell(12) grids) is the desk-scale case.
pub fn lemma_checks(n: usize, ceiling: u128) -> Result<LemmaReport, ExtremalError> {
    if n < 4 {
        return Err(ExtremalError::LemmaRange { n });
    }
    let cells = 3 * n;
    let e = RgsEnumerator::new(cells, 0);
    let estimate = e.count();
    if estimate > ceiling {
        return Err(ExtremalError::EnumerationTooLarge { estimate, ceiling });
    }
    let mut report = LemmaReport {
        n,
        enumerated: 0,
        pinned_configuration: LemmaOutcome::default(),
        rare_symbol: LemmaOutcome::default(),
    };
    let mut searcher = Searcher::default();
    let mut counts = vec![0usize; cells];
    let _ = e.for_each(|g| {
        report.enumerated += 1;
        let symbols = g.iter().copied().max().map_or(0, |s| s as usize + 1);
        counts[..symbols].fill(0);
        for &s in g {
            counts[s as usize] += 1;
        }
        let counts = &counts[..symbols];

        let (one, two) = (g[2 * n + 2], g[2 * n + 3]);
        let x = g[n + 1];
        let pinned = one != two && (x == one || x == two);
        let rare = counts.iter().any(|&c| c <= 3);
        if !pinned && !rare {
            return ControlFlow::<()>::Continue(());
        }
        searcher.load(3, n, g, symbols);
        if searcher.exists() {
            return ControlFlow::Continue(());
        }
        if pinned {
            let y = g[0];
            report
                .pinned_configuration
                .record(y == one || y == two, n, g);
        }
        if rare {
            let max = counts.iter().copied().max().unwrap_or(0);
            report.rare_symbol.record(max >= 2 * n - 2, n, g);
        }
        ControlFlow::Continue(())
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_n() {
        assert_eq!(
            lemma_checks(3, u128::MAX),
            Err(ExtremalError::LemmaRange { n: 3 })
        );
    }

    #[test]
    fn ceiling_blocks_n5() {
        assert!(matches!(
            lemma_checks(5, super::super::DEFAULT_CEILING),
            Err(ExtremalError::EnumerationTooLarge { .. })
        ));
    }
}
