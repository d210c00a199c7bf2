use core::fmt;

use super::ExtremalError;

/// Where a bound on `L(m, n)` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// `n - 1` for `n <= 2m - 2`, certified by the Parker array.
    ParkerConstruction,
    /// `floor((mn - 1) / (m - 1))`, certified by the flood array.
    FloodPigeonhole,
    /// `n - m + 1`, proved by induction on the number of rows.
    ColumnExcess,
    /// `floor((n - 1) / (m - 1))`, the row-by-row first fit guarantee.
    GreedyRowByRow,
    /// `floor((n - 1) / 16)` for square arrays (lopsided local lemma).
    LocalLemma,
    /// Every array with all-distinct symbols has a latin transversal.
    Trivial,
    /// `L(2, 2) = 1`, `L(2, n) = 2n - 1` for `n >= 3`.
    TwoRowFormula,
    /// `L(3, 3) = 2`, `L(3, 4) = 3`, `L(3, n) = floor((3n - 1) / 2)` for `n >= 5`.
    ThreeRowFormula,
    /// A value cited from outside work with no witness available here.
    CitedNoWitness,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ParkerConstruction => "parker-construction",
            Provenance::FloodPigeonhole => "flood-pigeonhole",
            Provenance::ColumnExcess => "column-excess",
            Provenance::GreedyRowByRow => "greedy-row-by-row",
            Provenance::LocalLemma => "local-lemma",
            Provenance::Trivial => "trivial",
            Provenance::TwoRowFormula => "two-row-formula",
            Provenance::ThreeRowFormula => "three-row-formula",
            Provenance::CitedNoWitness => "cited-no-witness",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        use Provenance::*;
        [
            ParkerConstruction,
            FloodPigeonhole,
            ColumnExcess,
            GreedyRowByRow,
            LocalLemma,
            Trivial,
            TwoRowFormula,
            ThreeRowFormula,
            CitedNoWitness,
        ]
        .into_iter()
        .find(|p| p.as_str() == s)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bound {
    pub value: usize,
    pub provenance: Provenance,
}

/// Closed-form knowledge about `L(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LBounds {
    pub lower: Bound,
    pub upper: Bound,
    pub exact: Option<Bound>,
}

fn best<I: IntoIterator<Item = Bound>>(it: I, better: impl Fn(usize, usize) -> bool) -> Bound {
    let mut it = it.into_iter();
    let mut acc = it.next().expect("at least one bound applies");
    for b in it {
        if better(b.value, acc.value) {
            acc = b;
        }
    }
    acc
}

/// Lower and upper bounds on `L(m, n)` from the known theorems, plus the exact
/// value where a closed form or a cited value exists.
pub fn theorem_bounds(m: usize, n: usize) -> Result<LBounds, ExtremalError> {
    if m < 2 || m > n {
        return Err(ExtremalError::InvalidShape { m, n });
    }
    use Provenance::*;
    let mut uppers = alloc::vec::Vec::with_capacity(3);
    if n <= 2 * m - 2 {
        uppers.push(Bound {
            value: n - 1,
            provenance: ParkerConstruction,
        });
    }
    uppers.push(Bound {
        value: (m * n - 1) / (m - 1),
        provenance: FloodPigeonhole,
    });
    if (m, n) == (4, 7) {
        uppers.push(Bound {
            value: 8,
            provenance: CitedNoWitness,
        });
    }
    let upper = best(uppers, |a, b| a < b);

    let mut lowers = alloc::vec![
        Bound {
            value: n - m + 1,
            provenance: ColumnExcess
        },
        Bound {
            value: (n - 1) / (m - 1),
            provenance: GreedyRowByRow
        },
    ];
    if m == n {
        lowers.push(Bound {
            value: (n - 1) / 16,
            provenance: LocalLemma,
        });
    }
    lowers.push(Bound {
        value: 1,
        provenance: Trivial,
    });
    let lower = best(lowers, |a, b| a > b);

    let exact = match (m, n) {
        (2, 2) => Some(Bound {
            value: 1,
            provenance: TwoRowFormula,
        }),
        (2, _) => Some(Bound {
            value: 2 * n - 1,
            provenance: TwoRowFormula,
        }),
        (3, 3) => Some(Bound {
            value: 2,
            provenance: ThreeRowFormula,
        }),
        (3, 4) => Some(Bound {
            value: 3,
            provenance: ThreeRowFormula,
        }),
        (3, _) => Some(Bound {
            value: (3 * n - 1) / 2,
            provenance: ThreeRowFormula,
        }),
        (4, 4) => Some(Bound {
            value: 3,
            provenance: CitedNoWitness,
        }),
        _ => None,
    };
    Ok(LBounds {
        lower,
        upper,
        exact,
    })
}

/// The value suggested by extrapolating the two- and three-row cases:
/// `n - 1` for `n <= 2m - 2`, else `floor((mn - 1) / (m - 1))`. Known to fail
/// at `(4, 7)`; reported for comparison only.
pub fn conjectured_value(m: usize, n: usize) -> Option<usize> {
    if m < 2 || m > n {
        return None;
    }
    Some(if n <= 2 * m - 2 {
        n - 1
    } else {
        (m * n - 1) / (m - 1)
    })
}
