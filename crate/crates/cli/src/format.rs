//! The grid text format.
//!
//! ```text
//! # comment lines start with '#'; blank lines are ignored
//! 2 3
//! a b c
//! c a b
//! ```
//!
//! The first data line holds the dimensions `m n`; exactly `m` data lines of
//! `n` whitespace-separated tokens follow. Symbol ids are assigned in order of
//! first appearance, row-major.

use lt_core::{Grid, GridError, Transversal};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("empty input: no dimension header")]
    Empty,
    #[error("line {line}: expected a header \"m n\" of two positive integers")]
    BadHeader { line: usize },
    #[error("line {line}: expected {expected} tokens, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("header declares {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("line {line}: expected \"row:col:symbol\"")]
    BadTransversalLine { line: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_grid(text: &str) -> Result<Grid, FormatError> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or(FormatError::Empty)?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let (m, n) = match dims.as_slice() {
        [m, n] => match (m.parse::<usize>(), n.parse::<usize>()) {
            (Ok(m), Ok(n)) if m > 0 && n > 0 => (m, n),
            _ => return Err(FormatError::BadHeader { line: hline }),
        },
        _ => return Err(FormatError::BadHeader { line: hline }),
    };
    let mut tokens = Vec::with_capacity(m * n);
    let mut rows = 0;
    for (line, l) in lines {
        let start = tokens.len();
        tokens.extend(l.split_whitespace());
        let found = tokens.len() - start;
        if found != n {
            return Err(FormatError::RaggedRow {
                line,
                expected: n,
                found,
            });
        }
        rows += 1;
    }
    if rows != m {
        return Err(FormatError::RowCount {
            expected: m,
            found: rows,
        });
    }
    Ok(Grid::from_tokens(m, n, tokens)?)
}

/// Inverse of [`parse_grid`], without a trailing newline.
pub fn serialize_grid(g: &Grid) -> String {
    format!("{} {}\n{g}", g.rows(), g.cols())
}

/// One `row:col:symbol` line per row (0-based row and column).
pub fn format_transversal(g: &Grid, t: &Transversal) -> String {
    t.columns()
        .iter()
        .enumerate()
        .map(|(r, &c)| format!("{r}:{c}:{}", g.token(g.get(r, c))))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Reads the output of [`format_transversal`] back into a transversal.
/// Lines must list rows `0..m` in order.
pub fn parse_transversal(text: &str) -> Result<Transversal, FormatError> {
    let mut cols = Vec::new();
    for (line, l) in data_lines(text) {
        let mut parts = l.splitn(3, ':');
        let (Some(r), Some(c), Some(_sym)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(FormatError::BadTransversalLine { line });
        };
        match (r.parse::<usize>(), c.parse::<usize>()) {
            (Ok(r), Ok(c)) if r == cols.len() => cols.push(c),
            _ => return Err(FormatError::BadTransversalLine { line }),
        }
    }
    Ok(Transversal::new(cols))
}
