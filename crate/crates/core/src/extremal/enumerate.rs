use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::grid::SymbolId;

/// Number of set partitions of `len` elements whose blocks all have at most
/// `cap` elements (`cap = 0` means unbounded).
///
/// Uses `P(t) = sum_{j=1..min(cap,t)} C(t-1, j-1) P(t-j)`: the block holding
/// the first element has `j` members chosen from the other `t - 1`.
pub fn restricted_partition_count(len: usize, cap: usize) -> u128 {
    let cap = if cap == 0 { len.max(1) } else { cap };
    let mut binom = vec![vec![0u128; len + 1]; len + 1];
    for i in 0..=len {
        binom[i][0] = 1;
        for j in 1..=i {
            binom[i][j] = binom[i - 1][j - 1] + if j < i { binom[i - 1][j] } else { 0 };
        }
    }
    let mut p = vec![0u128; len + 1];
    p[0] = 1;
    for t in 1..=len {
        p[t] = (1..=cap.min(t))
            .map(|j| binom[t - 1][j - 1] * p[t - j])
            .sum();
    }
    p[len]
}

/// Bell number `B(len)`.
pub fn bell(len: usize) -> u128 {
    restricted_partition_count(len, 0)
}

/// Lexicographic enumeration of restricted growth strings of a fixed length
/// whose blocks (runs of equal values, anywhere) have at most `cap` members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RgsEnumerator {
    len: usize,
    cap: usize,
}

impl RgsEnumerator {
    /// `cap = 0` means unbounded.
    pub fn new(len: usize, cap: usize) -> Self {
        RgsEnumerator {
            len,
            cap: if cap == 0 { len.max(1) } else { cap },
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Exact number of strings visited by [`RgsEnumerator::for_each`].
    pub fn count(&self) -> u128 {
        restricted_partition_count(self.len, self.cap)
    }

    /// All valid prefixes of length `depth` (clamped to `len`), in
    /// lexicographic order. Their completions partition the full enumeration.
    pub fn prefixes(&self, depth: usize) -> Vec<Vec<SymbolId>> {
        let depth = depth.min(self.len);
        let mut out = Vec::new();
        let shallow = RgsEnumerator {
            len: depth,
            cap: self.cap,
        };
        let _ = shallow.for_each(|p| {
            out.push(p.to_vec());
            ControlFlow::<()>::Continue(())
        });
        out
    }

    pub fn for_each<B, F>(&self, f: F) -> ControlFlow<B>
    where
        F: FnMut(&[SymbolId]) -> ControlFlow<B>,
    {
        self.for_each_with_prefix(&[], f)
    }

    /// Visits every completion of `prefix` in lexicographic order. An invalid
    /// prefix (not a restricted growth string, over the cap, or too long)
    /// has no completions.
    pub fn for_each_with_prefix<B, F>(&self, prefix: &[SymbolId], mut f: F) -> ControlFlow<B>
    where
        F: FnMut(&[SymbolId]) -> ControlFlow<B>,
    {
        if prefix.len() > self.len {
            return ControlFlow::Continue(());
        }
        let mut state = State {
            cells: vec![0; self.len],
            counts: vec![0; self.len + 1],
            cap: self.cap,
        };
        let mut blocks = 0;
        for (i, &s) in prefix.iter().enumerate() {
            let s = s as usize;
            if s > blocks || state.counts[s] as usize >= self.cap {
                return ControlFlow::Continue(());
            }
            blocks = blocks.max(s + 1);
            state.counts[s] += 1;
            state.cells[i] = s as SymbolId;
        }
        if self.len == 0 {
            return f(&[]);
        }
        state.fill(prefix.len(), blocks, &mut f)
    }
}

struct State {
    cells: Vec<SymbolId>,
    counts: Vec<u32>,
    cap: usize,
}

impl State {
    fn fill<B, F>(&mut self, pos: usize, blocks: usize, f: &mut F) -> ControlFlow<B>
    where
        F: FnMut(&[SymbolId]) -> ControlFlow<B>,
    {
        if pos == self.cells.len() {
            return f(&self.cells);
        }
        for s in 0..=blocks {
            if self.counts[s] as usize >= self.cap {
                continue;
            }
            self.counts[s] += 1;
            self.cells[pos] = s as SymbolId;
            let next_blocks = if s == blocks { blocks + 1 } else { blocks };
            let flow = self.fill(pos + 1, next_blocks, f);
            self.counts[s] -= 1;
            flow?;
        }
        ControlFlow::Continue(())
    }
}
