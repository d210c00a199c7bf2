//! Array families: Parker and flood arrays, abelian group tables, Hall arrays,
//! Snevily submatrices and seeded random generators.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::grid::{Grid, SymbolId};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("invalid shape {rows}x{cols}: {reason}")]
    InvalidShape {
        rows: usize,
        cols: usize,
        reason: &'static str,
    },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("expected {expected} b-elements, got {found}")]
    BLength { expected: usize, found: usize },
    #[error("element {index} out of range for a group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },
    #[error("group order {order} is even")]
    EvenOrder { order: usize },
    #[error("invalid index subset: {0}")]
    BadSubset(&'static str),
    #[error("multiplicity cap must be at least 1")]
    ZeroCap,
    #[error("{cells} cells cannot be split into symbols of multiplicity exactly {mult}")]
    Indivisible { cells: usize, mult: usize },
}

/// A finite abelian group `Z_{d1} x ... x Z_{dr}`.
///
/// Elements are indexed by their factor tuples in lexicographic order, so
/// element `0` is the identity and, for a cyclic group, element `i` is `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<usize>,
}

impl GroupSpec {
    pub fn new(factors: Vec<usize>) -> Result<Self, ConstructionError> {
        if factors.is_empty() {
            return Err(ConstructionError::InvalidGroup("no factors".into()));
        }
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(ConstructionError::InvalidGroup(alloc::format!(
                "cyclic factor order {d} is below 2"
            )));
        }
        Ok(GroupSpec { factors })
    }

    pub fn cyclic(n: usize) -> Result<Self, ConstructionError> {
        GroupSpec::new(vec![n])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product()
    }

    /// Factor tuple of element `index`.
    pub fn element(&self, index: usize) -> Vec<usize> {
        let mut rest = index;
        let mut out = vec![0; self.factors.len()];
        for (slot, &d) in out.iter_mut().zip(&self.factors).rev() {
            *slot = rest % d;
            rest /= d;
        }
        out
    }

    /// Index of `a + b`.
    pub fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for &d in self.factors.iter().rev() {
            out += ((a % d + b % d) % d) * place;
            a /= d;
            b /= d;
            place *= d;
        }
        out
    }
}

impl FromStr for GroupSpec {
    type Err = ConstructionError;

    /// Comma-separated cyclic orders: `"4"` is `Z_4`, `"2,2"` is `Z_2 x Z_2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let factors = s
            .split(',')
            .map(|p| {
                p.trim().parse::<usize>().map_err(|_| {
                    ConstructionError::InvalidGroup(alloc::format!("bad factor {p:?}"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        GroupSpec::new(factors)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// `order - 1` group elements (by index), repetition allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSequence {
    pub elements: Vec<usize>,
}

impl BSequence {
    pub fn new(elements: Vec<usize>) -> Self {
        BSequence { elements }
    }

    pub fn random(spec: &GroupSpec, seed: u64) -> Self {
        let mut rng = rng::seeded(seed);
        let n = spec.order();
        BSequence {
            elements: (0..n - 1).map(|_| rng.gen_range(0..n)).collect(),
        }
    }
}

fn labeled(rows: usize, cols: usize, labels: &[usize]) -> Grid {
    let tokens: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    Grid::from_tokens(rows, cols, &tokens).expect("constructed grids are valid")
}

/// Parker's array: row `i` (1-based) holds symbol `i` in the first
/// `ceil(n/2)` columns and symbol `i - 1` (symbol `m` for row 1) in the rest.
///
/// Every symbol occurs exactly `n` times. A latin transversal would have to
/// use every symbol once, which forces all rows into the same block, so none
/// exists when `n <= 2m - 2`.
pub fn parker(m: usize, n: usize) -> Result<Grid, ConstructionError> {
    if m < 2 || m > n {
        return Err(ConstructionError::InvalidShape {
            rows: m,
            cols: n,
            reason: "need 2 <= m <= n",
        });
    }
    let left = n.div_ceil(2);
    let mut labels = Vec::with_capacity(m * n);
    for i in 1..=m {
        let prev = if i == 1 { m } else { i - 1 };
        labels.extend((0..n).map(|c| if c < left { i } else { prev }));
    }
    Ok(labeled(m, n, &labels))
}

/// Fills the grid row-major with `m - 1` symbols whose quotas are as equal as
/// possible. Pigeonhole rules out any latin transversal.
pub fn flood(m: usize, n: usize) -> Result<Grid, ConstructionError> {
    if m < 2 || n < m {
        return Err(ConstructionError::InvalidShape {
            rows: m,
            cols: n,
            reason: "need 2 <= m <= n",
        });
    }
    let cells = m * n;
    let k = m - 1;
    let (base, extra) = (cells / k, cells % k);
    let mut labels = Vec::with_capacity(cells);
    for s in 0..k {
        let quota = base + usize::from(s < extra);
        labels.extend(core::iter::repeat_n(s + 1, quota));
    }
    Ok(labeled(m, n, &labels))
}

/// Addition table of the group: cell `(i, j)` is `a_i + a_j`.
pub fn group_table(spec: &GroupSpec) -> Grid {
    let n = spec.order();
    let labels: Vec<usize> = (0..n * n).map(|x| spec.add(x / n, x % n)).collect();
    labeled(n, n, &labels)
}

/// Hall's `(n-1) x n` array: cell `(i, j)` is `b_i + a_j`.
pub fn hall_array(spec: &GroupSpec, b: &BSequence) -> Result<Grid, ConstructionError> {
    let n = spec.order();
    if b.elements.len() != n - 1 {
        return Err(ConstructionError::BLength {
            expected: n - 1,
            found: b.elements.len(),
        });
    }
    if let Some(&index) = b.elements.iter().find(|&&e| e >= n) {
        return Err(ConstructionError::ElementOutOfRange { index, order: n });
    }
    let labels: Vec<usize> = b
        .elements
        .iter()
        .flat_map(|&bi| (0..n).map(move |j| spec.add(bi, j)))
        .collect();
    Ok(labeled(n - 1, n, &labels))
}

fn check_subset(idx: &[usize], n: usize) -> Result<Vec<usize>, ConstructionError> {
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(ConstructionError::BadSubset("repeated index"));
    }
    if sorted.last().is_some_and(|&i| i >= n) {
        return Err(ConstructionError::BadSubset("index out of range"));
    }
    Ok(sorted)
}

/// The `k x k` restriction of the group table of an odd-order group to the
/// given row and column index subsets (taken in ascending order).
pub fn snevily_submatrix(
    spec: &GroupSpec,
    rows: &[usize],
    cols: &[usize],
) -> Result<Grid, ConstructionError> {
    let n = spec.order();
    if n.is_multiple_of(2) {
        return Err(ConstructionError::EvenOrder { order: n });
    }
    if rows.len() != cols.len() {
        return Err(ConstructionError::BadSubset(
            "row and column subsets differ in size",
        ));
    }
    if rows.is_empty() {
        return Err(ConstructionError::BadSubset("empty subset"));
    }
    let rows = check_subset(rows, n)?;
    let cols = check_subset(cols, n)?;
    let labels: Vec<usize> = rows
        .iter()
        .flat_map(|&r| cols.iter().map(move |&c| spec.add(r, c)))
        .collect();
    Ok(labeled(rows.len(), cols.len(), &labels))
}

/// Seeded random grid whose symbols each occur at most `max_mult` times.
///
/// Cells are filled left to right. Each cell opens a fresh symbol with
/// probability `1 / max_mult` (always when every open symbol is saturated),
/// otherwise it reuses a uniformly chosen unsaturated symbol.
pub fn random_grid(
    m: usize,
    n: usize,
    max_mult: usize,
    seed: u64,
) -> Result<Grid, ConstructionError> {
    if max_mult == 0 {
        return Err(ConstructionError::ZeroCap);
    }
    if m == 0 || n == 0 {
        return Err(ConstructionError::InvalidShape {
            rows: m,
            cols: n,
            reason: "empty",
        });
    }
    let mut rng = rng::seeded(seed);
    let mut counts: Vec<usize> = Vec::new();
    let mut open: Vec<SymbolId> = Vec::new();
    let mut cells = Vec::with_capacity(m * n);
    for _ in 0..m * n {
        let s = if open.is_empty() || rng.gen_range(0..max_mult) == 0 {
            counts.push(0);
            open.push((counts.len() - 1) as SymbolId);
            open.len() - 1
        } else {
            rng.gen_range(0..open.len())
        };
        let id = open[s];
        counts[id as usize] += 1;
        if counts[id as usize] == max_mult {
            open.swap_remove(s);
        }
        cells.push(id);
    }
    Ok(Grid::from_symbols(m, n, cells).expect("generated ids are dense"))
}

/// Seeded random grid in which every symbol occurs exactly `mult` times
/// (a uniform shuffle of `m * n / mult` symbol blocks).
pub fn random_exact_multiplicity(
    m: usize,
    n: usize,
    mult: usize,
    seed: u64,
) -> Result<Grid, ConstructionError> {
    if mult == 0 {
        return Err(ConstructionError::ZeroCap);
    }
    if m == 0 || n == 0 {
        return Err(ConstructionError::InvalidShape {
            rows: m,
            cols: n,
            reason: "empty",
        });
    }
    if !(m * n).is_multiple_of(mult) {
        return Err(ConstructionError::Indivisible { cells: m * n, mult });
    }
    let mut rng = rng::seeded(seed);
    let mut cells: Vec<SymbolId> = (0..m * n).map(|i| (i / mult) as SymbolId).collect();
    cells.shuffle(&mut rng);
    let g = Grid::from_symbols(m, n, cells).expect("every id occurs");
    Ok(g.relabel_canonical())
}

/// Seeded randomized backtracking fill of a latin square, cell by cell in
/// row-major order with shuffled candidate symbols. Not uniform.
pub fn random_latin_square(order: usize, seed: u64) -> Grid {
    assert!(order >= 1, "latin square order must be at least 1");
    let mut rng = rng::seeded(seed);
    let mut fill = LatinFill::new(order);
    let ok = fill.random_fill(0, &mut rng);
    debug_assert!(ok, "every partial row-major latin fill extends");
    Grid::from_symbols(order, order, fill.cells).expect("latin fill uses every symbol")
}

/// Calls `f` on every latin square of the given order (symbols `0..order`,
/// no normalization), in lexicographic row-major order. Returns how many were
/// visited.
pub fn for_each_latin_square<F: FnMut(&Grid)>(order: usize, mut f: F) -> u64 {
    assert!(order >= 1, "latin square order must be at least 1");
    let mut fill = LatinFill::new(order);
    let mut visited = 0;
    fill.enumerate(0, &mut |cells| {
        visited += 1;
        f(&Grid::from_symbols(order, order, cells.to_vec()).expect("latin square"));
    });
    visited
}

struct LatinFill {
    n: usize,
    cells: Vec<SymbolId>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
}

impl LatinFill {
    fn new(n: usize) -> Self {
        assert!(n <= 64, "latin squares above order 64 are not supported");
        LatinFill {
            n,
            cells: vec![0; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
        }
    }

    fn candidates(&self, pos: usize) -> u64 {
        let (r, c) = (pos / self.n, pos % self.n);
        let all = if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        };
        all & !self.row_used[r] & !self.col_used[c]
    }

    fn place(&mut self, pos: usize, s: usize) {
        let (r, c) = (pos / self.n, pos % self.n);
        self.cells[pos] = s as SymbolId;
        self.row_used[r] |= 1 << s;
        self.col_used[c] |= 1 << s;
    }

    fn unplace(&mut self, pos: usize, s: usize) {
        let (r, c) = (pos / self.n, pos % self.n);
        self.row_used[r] &= !(1 << s);
        self.col_used[c] &= !(1 << s);
    }

    fn random_fill<R: Rng>(&mut self, pos: usize, rng: &mut R) -> bool {
        if pos == self.n * self.n {
            return true;
        }
        let mask = self.candidates(pos);
        let mut options: Vec<usize> = (0..self.n).filter(|&s| mask & (1 << s) != 0).collect();
        options.shuffle(rng);
        for s in options {
            self.place(pos, s);
            if self.random_fill(pos + 1, rng) {
                return true;
            }
            self.unplace(pos, s);
        }
        false
    }

    fn enumerate(&mut self, pos: usize, f: &mut dyn FnMut(&[SymbolId])) {
        if pos == self.n * self.n {
            f(&self.cells);
            return;
        }
        let mut mask = self.candidates(pos);
        while mask != 0 {
            let s = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            self.place(pos, s);
            self.enumerate(pos + 1, f);
            self.unplace(pos, s);
        }
    }
}
