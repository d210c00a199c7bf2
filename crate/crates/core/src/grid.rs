//! The array model: grids of symbols, transversals, multiplicity profiles and
//! the row/column/relabel symmetries that preserve latin-transversal structure.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Dense internal symbol id. Ids of a grid with `s` symbols are `0..s`.
pub type SymbolId = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GridError {
    #[error("grid must have at least one row and one column, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("expected {expected} cells, got {found}")]
    CellCount { expected: usize, found: usize },
    #[error("symbol id {id} out of range for {symbols} symbols")]
    SymbolOutOfRange { id: SymbolId, symbols: usize },
    #[error("symbol id {id} never occurs")]
    UnusedSymbol { id: SymbolId },
    #[error("invalid token {token:?}")]
    InvalidToken { token: String },
    #[error("duplicate token {token:?}")]
    DuplicateToken { token: String },
    #[error("transversal has {found} entries, grid has {rows} rows")]
    TransversalLength { rows: usize, found: usize },
    #[error("column {col} out of range for {cols} columns")]
    ColumnOutOfRange { col: usize, cols: usize },
    #[error("{what} is not a permutation of 0..{len}")]
    NotAPermutation { what: &'static str, len: usize },
}

/// An `rows x cols` array of symbols stored row-major.
///
/// Symbols are text tokens externally and dense ids internally; `tokens[id]`
/// is the text of symbol `id`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    rows: usize,
    cols: usize,
    cells: Vec<SymbolId>,
    tokens: Vec<String>,
}

fn valid_token(t: &str) -> bool {
    !t.is_empty() && !t.chars().any(char::is_whitespace)
}

impl Grid {
    /// Builds a grid from explicit ids and their token table.
    pub fn new(
        rows: usize,
        cols: usize,
        cells: Vec<SymbolId>,
        tokens: Vec<String>,
    ) -> Result<Self, GridError> {
        if rows == 0 || cols == 0 {
            return Err(GridError::EmptyShape { rows, cols });
        }
        if cells.len() != rows * cols {
            return Err(GridError::CellCount {
                expected: rows * cols,
                found: cells.len(),
            });
        }
        let mut seen = vec![false; tokens.len()];
        for &c in &cells {
            match seen.get_mut(c as usize) {
                Some(s) => *s = true,
                None => {
                    return Err(GridError::SymbolOutOfRange {
                        id: c,
                        symbols: tokens.len(),
                    })
                }
            }
        }
        if let Some(id) = seen.iter().position(|s| !s) {
            return Err(GridError::UnusedSymbol { id: id as SymbolId });
        }
        for (i, t) in tokens.iter().enumerate() {
            if !valid_token(t) {
                return Err(GridError::InvalidToken { token: t.clone() });
            }
            if tokens[..i].contains(t) {
                return Err(GridError::DuplicateToken { token: t.clone() });
            }
        }
        Ok(Grid {
            rows,
            cols,
            cells,
            tokens,
        })
    }

    /// Builds a grid from dense ids, naming each symbol by its decimal id.
    pub fn from_symbols(rows: usize, cols: usize, cells: Vec<SymbolId>) -> Result<Self, GridError> {
        let symbols = cells.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let tokens = (0..symbols).map(|i| i.to_string()).collect();
        Grid::new(rows, cols, cells, tokens)
    }

    /// Builds a grid from row-major text tokens, numbering symbols in order of
    /// first appearance.
    pub fn from_tokens<I, S>(rows: usize, cols: usize, tokens: I) -> Result<Self, GridError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut table: Vec<String> = Vec::new();
        let mut cells = Vec::with_capacity(rows * cols);
        for tok in tokens {
            let tok = tok.as_ref();
            if !valid_token(tok) {
                return Err(GridError::InvalidToken { token: tok.into() });
            }
            let id = match table.iter().position(|t| t == tok) {
                Some(id) => id,
                None => {
                    table.push(tok.into());
                    table.len() - 1
                }
            };
            cells.push(id as SymbolId);
        }
        Grid::new(rows, cols, cells, table)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major cell ids.
    pub fn cells(&self) -> &[SymbolId] {
        &self.cells
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token(&self, id: SymbolId) -> &str {
        &self.tokens[id as usize]
    }

    pub fn num_symbols(&self) -> usize {
        self.tokens.len()
    }

    pub fn get(&self, row: usize, col: usize) -> SymbolId {
        self.cells[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[SymbolId] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn multiplicities(&self) -> MultiplicityProfile {
        MultiplicityProfile::of(&self.cells, self.num_symbols())
    }

    /// True when the grid is square and every row and column is a permutation
    /// of the symbols.
    pub fn is_latin_square(&self) -> bool {
        let n = self.rows;
        if self.cols != n || self.num_symbols() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for r in 0..n {
            seen.fill(false);
            for c in 0..n {
                let s = self.get(r, c) as usize;
                if core::mem::replace(&mut seen[s], true) {
                    return false;
                }
            }
        }
        for c in 0..n {
            seen.fill(false);
            for r in 0..n {
                let s = self.get(r, c) as usize;
                if core::mem::replace(&mut seen[s], true) {
                    return false;
                }
            }
        }
        true
    }

    /// Checks that `t` is a transversal of this grid and, when `latin` is
    /// set, that it picks pairwise distinct symbols.
    pub fn verify_transversal(&self, t: &Transversal, latin: bool) -> Result<bool, GridError> {
        let cols = t.columns();
        if cols.len() != self.rows {
            return Err(GridError::TransversalLength {
                rows: self.rows,
                found: cols.len(),
            });
        }
        if let Some(&col) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(GridError::ColumnOutOfRange {
                col,
                cols: self.cols,
            });
        }
        let mut used_cols = vec![false; self.cols];
        let mut used_syms = vec![false; self.num_symbols()];
        for (r, &c) in cols.iter().enumerate() {
            if core::mem::replace(&mut used_cols[c], true) {
                return Ok(false);
            }
            let s = self.get(r, c) as usize;
            if core::mem::replace(&mut used_syms[s], true) && latin {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Applies a symmetry: output cell `(row_perm[r], col_perm[c])` holds
    /// `relabel[input(r, c)]`. Tokens travel with their symbols.
    pub fn transform(&self, s: &Symmetry) -> Result<Grid, GridError> {
        check_perm(&s.row_perm, self.rows, "row permutation")?;
        check_perm(&s.col_perm, self.cols, "column permutation")?;
        check_perm(&s.relabel, self.num_symbols(), "relabeling")?;
        let mut cells = vec![0; self.cells.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                cells[s.row_perm[r] * self.cols + s.col_perm[c]] =
                    s.relabel[self.get(r, c) as usize] as SymbolId;
            }
        }
        let mut tokens = vec![String::new(); self.tokens.len()];
        for (old, tok) in self.tokens.iter().enumerate() {
            tokens[s.relabel[old]] = tok.clone();
        }
        Ok(Grid {
            rows: self.rows,
            cols: self.cols,
            cells,
            tokens,
        })
    }

    /// Renumbers symbols so that the row-major cell sequence is a restricted
    /// growth string. Idempotent; collapses every relabeling orbit to one grid.
    pub fn relabel_canonical(&self) -> Grid {
        let mut map = vec![SymbolId::MAX; self.num_symbols()];
        let mut tokens = Vec::with_capacity(self.num_symbols());
        let cells = self
            .cells
            .iter()
            .map(|&c| {
                let slot = &mut map[c as usize];
                if *slot == SymbolId::MAX {
                    *slot = tokens.len() as SymbolId;
                    tokens.push(self.tokens[c as usize].clone());
                }
                *slot
            })
            .collect();
        Grid {
            rows: self.rows,
            cols: self.cols,
            cells,
            tokens,
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(self.token(self.get(r, c)))?;
            }
        }
        Ok(())
    }
}

/// Renumbers a raw id sequence into restricted-growth form in place.
pub(crate) fn rgs_relabel(cells: &mut [SymbolId], scratch: &mut Vec<SymbolId>) {
    scratch.clear();
    let mut next = 0;
    for c in cells.iter_mut() {
        let i = *c as usize;
        if scratch.len() <= i {
            scratch.resize(i + 1, SymbolId::MAX);
        }
        if scratch[i] == SymbolId::MAX {
            scratch[i] = next;
            next += 1;
        }
        *c = scratch[i];
    }
}

fn check_perm(p: &[usize], len: usize, what: &'static str) -> Result<(), GridError> {
    if p.len() != len {
        return Err(GridError::NotAPermutation { what, len });
    }
    let mut seen = vec![false; len];
    for &x in p {
        if x >= len || core::mem::replace(&mut seen[x], true) {
            return Err(GridError::NotAPermutation { what, len });
        }
    }
    Ok(())
}

/// One chosen column per row; `columns()[i]` is the column picked in row `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transversal(Vec<usize>);

impl Transversal {
    pub fn new(columns: Vec<usize>) -> Self {
        Transversal(columns)
    }

    pub fn columns(&self) -> &[usize] {
        &self.0
    }

    pub fn into_columns(self) -> Vec<usize> {
        self.0
    }

    /// The symbols picked from `g`, row by row.
    pub fn symbols<'a>(&'a self, g: &'a Grid) -> impl Iterator<Item = SymbolId> + 'a {
        self.0.iter().enumerate().map(move |(r, &c)| g.get(r, c))
    }
}

/// Occurrence count of every symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityProfile {
    /// `counts[id]` is the number of cells holding symbol `id`.
    pub counts: Vec<usize>,
    pub max_mult: usize,
}

impl MultiplicityProfile {
    pub(crate) fn of(cells: &[SymbolId], symbols: usize) -> Self {
        let mut counts = vec![0; symbols];
        for &c in cells {
            counts[c as usize] += 1;
        }
        let max_mult = counts.iter().copied().max().unwrap_or(0);
        MultiplicityProfile { counts, max_mult }
    }

    pub fn min_mult(&self) -> usize {
        self.counts.iter().copied().min().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// A row permutation, a column permutation and a symbol relabeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symmetry {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub relabel: Vec<usize>,
}

impl Symmetry {
    pub fn identity(rows: usize, cols: usize, symbols: usize) -> Self {
        Symmetry {
            row_perm: (0..rows).collect(),
            col_perm: (0..cols).collect(),
            relabel: (0..symbols).collect(),
        }
    }

    /// Identity symmetry sized for `g`.
    pub fn identity_for(g: &Grid) -> Self {
        Symmetry::identity(g.rows(), g.cols(), g.num_symbols())
    }

    /// A uniformly random symmetry of `g`.
    pub fn random_for<R: rand::Rng + ?Sized>(g: &Grid, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut s = Symmetry::identity_for(g);
        s.row_perm.shuffle(rng);
        s.col_perm.shuffle(rng);
        s.relabel.shuffle(rng);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Grid {
        let cells = (0..n * n)
            .map(|i| ((i / n + i % n) % n) as SymbolId)
            .collect();
        Grid::from_symbols(n, n, cells).unwrap()
    }

    #[test]
    fn first_appearance_numbering() {
        let g = Grid::from_tokens(2, 2, ["1", "2", "2", "1"]).unwrap();
        assert_eq!(g.cells(), &[0, 1, 1, 0]);
        assert_eq!(g.tokens(), &["1", "2"]);
    }

    #[test]
    fn rejects_invalid_grids() {
        assert_eq!(
            Grid::from_symbols(2, 2, vec![0, 1, 1]),
            Err(GridError::CellCount {
                expected: 4,
                found: 3
            })
        );
        assert_eq!(
            Grid::new(1, 2, vec![0, 2], vec!["a".into(), "b".into(), "c".into()]),
            Err(GridError::UnusedSymbol { id: 1 })
        );
        assert!(matches!(
            Grid::new(1, 2, vec![0, 1], vec!["a".into(), "a".into()]),
            Err(GridError::DuplicateToken { .. })
        ));
        assert!(matches!(
            Grid::from_tokens(1, 1, ["a b"]),
            Err(GridError::InvalidToken { .. })
        ));
        assert!(matches!(
            Grid::from_symbols(0, 3, vec![]),
            Err(GridError::EmptyShape { .. })
        ));
    }

    #[test]
    fn multiplicities_count_cells() {
        let g = Grid::from_tokens(2, 3, ["a"; 6]).unwrap();
        let p = g.multiplicities();
        assert_eq!(p.counts, vec![6]);
        assert_eq!(p.max_mult, 6);
        let p = z(3).multiplicities();
        assert_eq!(p.counts, vec![3, 3, 3]);
        assert_eq!(p.total(), 9);
    }

    #[test]
    fn verify_transversal_cases() {
        let z2 = z(2);
        assert_eq!(
            z2.verify_transversal(&Transversal::new(vec![0, 1]), true),
            Ok(false)
        );
        assert_eq!(
            z2.verify_transversal(&Transversal::new(vec![0, 1]), false),
            Ok(true)
        );
        assert_eq!(
            z(3).verify_transversal(&Transversal::new(vec![0, 1, 2]), true),
            Ok(true)
        );
        assert_eq!(
            z(3).verify_transversal(&Transversal::new(vec![0, 0, 1]), false),
            Ok(false)
        );
        assert!(matches!(
            z2.verify_transversal(&Transversal::new(vec![0]), true),
            Err(GridError::TransversalLength { .. })
        ));
        assert!(matches!(
            z2.verify_transversal(&Transversal::new(vec![0, 5]), true),
            Err(GridError::ColumnOutOfRange { .. })
        ));
    }

    #[test]
    fn transform_identity_and_involution() {
        let g = Grid::from_tokens(2, 3, ["a", "b", "c", "c", "a", "a"]).unwrap();
        assert_eq!(g.transform(&Symmetry::identity_for(&g)).unwrap(), g);
        let mut swap = Symmetry::identity_for(&g);
        swap.row_perm = vec![1, 0];
        let once = g.transform(&swap).unwrap();
        assert_ne!(once, g);
        assert_eq!(once.row(0), g.row(1));
        assert_eq!(once.transform(&swap).unwrap(), g);
    }

    #[test]
    fn transform_rejects_bad_sizes() {
        let g = z(3);
        let mut s = Symmetry::identity_for(&g);
        s.col_perm = vec![0, 1];
        assert!(matches!(
            g.transform(&s),
            Err(GridError::NotAPermutation { .. })
        ));
        s.col_perm = vec![0, 1, 1];
        assert!(g.transform(&s).is_err());
    }

    #[test]
    fn canonical_relabeling() {
        let g = Grid::from_symbols(1, 4, vec![2, 2, 0, 1]).unwrap();
        let c = g.relabel_canonical();
        assert_eq!(c.cells(), &[0, 0, 1, 2]);
        assert_eq!(c.tokens(), &["2", "0", "1"]);
        assert_eq!(c.relabel_canonical(), c);

        let mut s = Symmetry::identity_for(&g);
        s.relabel = vec![1, 2, 0];
        assert_eq!(g.transform(&s).unwrap().relabel_canonical(), c);
    }

    #[test]
    fn latin_square_detection() {
        assert!(z(5).is_latin_square());
        assert!(!Grid::from_tokens(2, 2, ["a", "b", "b", "b"])
            .unwrap()
            .is_latin_square());
        assert!(!Grid::from_tokens(1, 2, ["a", "b"])
            .unwrap()
            .is_latin_square());
    }

    #[test]
    fn display_uses_tokens() {
        let g = Grid::from_tokens(2, 2, ["x7", "y", "y", "x7"]).unwrap();
        assert_eq!(alloc::format!("{g}"), "x7 y\ny x7");
    }
}
