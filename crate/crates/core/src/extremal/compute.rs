use alloc::collections::BTreeMap;
use core::time::Duration;

use super::bounds::{theorem_bounds, LBounds};
use super::witness::{witness_search, SearchMode, WitnessOutcome, WitnessQuery, DEFAULT_CEILING};
use super::ExtremalError;
use crate::constructions::{flood, parker};
use crate::grid::Grid;
use crate::solver::{find_transversal, SearchConfig};

/// Resources [`compute_l`] may spend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LBudget {
    /// Largest exhaustive enumeration allowed per cap level.
    pub ceiling: u128,
    /// Random trials at the first level that exhaustive search cannot reach.
    pub random_trials: u64,
    pub seed: u64,
    /// Wall-clock budget per search, honored only with the `std` feature.
    pub time_budget: Option<Duration>,
}

impl Default for LBudget {
    fn default() -> Self {
        LBudget {
            ceiling: DEFAULT_CEILING,
            random_trials: 10_000,
            seed: 0,
            time_budget: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Lower and upper sides both certified.
    Exact,
    /// A certified interval; the lower side was only sampled.
    Bounded,
    /// A certified interval and no search evidence for the lower side.
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::Bounded => "bounded",
            Status::Unknown => "unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Status::Exact, Status::Bounded, Status::Unknown]
            .into_iter()
            .find(|x| x.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessSource {
    Parker,
    Flood,
    ExhaustiveSearch,
    RandomSearch,
}

impl WitnessSource {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessSource::Parker => "parker",
            WitnessSource::Flood => "flood",
            WitnessSource::ExhaustiveSearch => "exhaustive-search",
            WitnessSource::RandomSearch => "random-search",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        use WitnessSource::*;
        [Parker, Flood, ExhaustiveSearch, RandomSearch]
            .into_iter()
            .find(|x| x.as_str() == s)
    }
}

/// Search statistics backing an [`LResult`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Certificate {
    /// Largest cap at which exhaustive enumeration found no witness.
    pub exhaustive_clean_cap: Option<usize>,
    pub grids_enumerated: u64,
    /// Cap of the randomized sweep, when one ran.
    pub random_cap: Option<usize>,
    pub random_trials: u64,
    /// Some level was skipped because it exceeded the enumeration ceiling.
    pub ceiling_hit: bool,
    pub witness_source: Option<WitnessSource>,
}

/// Computed knowledge of `L(m, n)`: the certified interval `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LResult {
    pub m: usize,
    pub n: usize,
    pub status: Status,
    pub lower: usize,
    pub upper: usize,
    /// The certified value when exact, otherwise the closed-form or cited
    /// value if one exists.
    pub value: Option<usize>,
    /// Grid with multiplicity at most `upper + 1` and no latin transversal.
    pub witness: Option<Grid>,
    pub bounds: LBounds,
    pub certificate: Certificate,
}

impl LResult {
    /// Re-checks the internal invariants and, when present, the witness.
    pub fn verify(&self) -> Result<(), ExtremalError> {
        if self.lower > self.upper {
            return Err(ExtremalError::InvalidResult(
                "lower bound exceeds upper bound",
            ));
        }
        if self.status == Status::Exact
            && (self.lower != self.upper || self.value != Some(self.lower))
        {
            return Err(ExtremalError::InvalidResult(
                "exact status without a matching value",
            ));
        }
        if let Some(w) = &self.witness {
            if (w.rows(), w.cols()) != (self.m, self.n) {
                return Err(ExtremalError::InvalidResult("witness has the wrong shape"));
            }
            if w.multiplicities().max_mult > self.upper + 1 {
                return Err(ExtremalError::InvalidResult(
                    "witness exceeds the multiplicity cap",
                ));
            }
            if find_transversal(w, &SearchConfig::default())?.is_some() {
                return Err(ExtremalError::InvalidResult(
                    "witness has a latin transversal",
                ));
            }
        } else if self.status == Status::Exact {
            return Err(ExtremalError::InvalidResult(
                "exact status without a witness",
            ));
        }
        Ok(())
    }
}

enum Probe {
    Witness(Grid),
    Clean,
    Unreachable,
}

struct Run<'a> {
    m: usize,
    n: usize,
    budget: &'a LBudget,
    exhaustive: &'a mut dyn FnMut(&WitnessQuery) -> Result<WitnessOutcome, ExtremalError>,
    cert: Certificate,
}

impl Run<'_> {
    fn probe(&mut self, k: usize) -> Result<Probe, ExtremalError> {
        let q = WitnessQuery {
            ceiling: self.budget.ceiling,
            time_budget: self.budget.time_budget,
            ..WitnessQuery::exhaustive(self.m, self.n, k)
        };
        match (self.exhaustive)(&q) {
            Ok(out) => {
                self.cert.grids_enumerated += out.examined;
                Ok(match out.witness {
                    Some(w) => Probe::Witness(w),
                    None => {
                        self.cert.exhaustive_clean_cap =
                            Some(self.cert.exhaustive_clean_cap.map_or(k, |c| c.max(k)));
                        Probe::Clean
                    }
                })
            }
            Err(ExtremalError::EnumerationTooLarge { .. }) | Err(ExtremalError::Interrupted) => {
                self.cert.ceiling_hit = true;
                Ok(Probe::Unreachable)
            }
            Err(e) => Err(e),
        }
    }

    fn sample(&mut self, k: usize) -> Result<Option<Grid>, ExtremalError> {
        if self.budget.random_trials == 0 {
            return Ok(None);
        }
        let q = WitnessQuery {
            mode: SearchMode::Randomized {
                trials: self.budget.random_trials,
            },
            seed: self.budget.seed,
            time_budget: self.budget.time_budget,
            ..WitnessQuery::exhaustive(self.m, self.n, k)
        };
        let out = witness_search(&q)?;
        self.cert.random_cap = Some(k);
        self.cert.random_trials += out.examined;
        Ok(out.witness)
    }
}

/// Computes `L(m, n)` as far as the budget allows, single-threaded.
pub fn compute_l(m: usize, n: usize, budget: &LBudget) -> Result<LResult, ExtremalError> {
    compute_l_with(m, n, budget, &mut witness_search)
}

/// [`compute_l`] with a caller-supplied exhaustive witness search (for
/// example a parallel one). The search must honor the query's ceiling and
/// answer exactly like [`witness_search`].
///
/// The upper side starts from the Parker or flood witness. With a known
/// closed form `v`, cap `v` is checked directly (and cap `v + 1` when no
/// construction reaches it); otherwise caps ascend from the proven lower
/// bound until a witness appears. Levels beyond the ceiling fall back to a
/// randomized sweep, which can only lower the upper side.
pub fn compute_l_with(
    m: usize,
    n: usize,
    budget: &LBudget,
    exhaustive: &mut dyn FnMut(&WitnessQuery) -> Result<WitnessOutcome, ExtremalError>,
) -> Result<LResult, ExtremalError> {
    let bounds = theorem_bounds(m, n)?;
    let mut run = Run {
        m,
        n,
        budget,
        exhaustive,
        cert: Certificate::default(),
    };

    let flood_cap = (m * n).div_ceil(m - 1);
    let (mut witness, mut upper, source) = if n <= 2 * m - 2 && n < flood_cap {
        (
            parker(m, n).expect("valid shape"),
            n - 1,
            WitnessSource::Parker,
        )
    } else {
        (
            flood(m, n).expect("valid shape"),
            flood_cap - 1,
            WitnessSource::Flood,
        )
    };
    run.cert.witness_source = Some(source);
    let mut lower = bounds.lower.value;
    let mut sampled = false;

    let known = bounds
        .exact
        .map(|b| b.value)
        .filter(|&v| v >= lower && v <= upper);
    let mut ascend = true;
    if let Some(v) = known {
        ascend = false;
        if v < upper {
            match run.probe(v + 1)? {
                Probe::Witness(w) => {
                    (witness, upper) = (w, v);
                    run.cert.witness_source = Some(WitnessSource::ExhaustiveSearch);
                }
                Probe::Clean => {
                    lower = v + 1;
                    ascend = true;
                }
                Probe::Unreachable => {
                    sampled = true;
                    if let Some(w) = run.sample(v + 1)? {
                        (witness, upper) = (w, v);
                        run.cert.witness_source = Some(WitnessSource::RandomSearch);
                    }
                }
            }
        }
        if !ascend && lower < upper {
            match run.probe(upper)? {
                Probe::Witness(w) => {
                    (witness, upper) = (w, upper - 1);
                    run.cert.witness_source = Some(WitnessSource::ExhaustiveSearch);
                    ascend = true;
                }
                Probe::Clean => lower = upper,
                Probe::Unreachable => {
                    if !sampled {
                        sampled = true;
                        if let Some(w) = run.sample(upper)? {
                            (witness, upper) = (w, upper - 1);
                            run.cert.witness_source = Some(WitnessSource::RandomSearch);
                        }
                    }
                }
            }
        } else if !ascend && lower == upper && lower >= 1 {
            // Already settled by theorems; confirm computationally when cheap.
            match run.probe(lower)? {
                Probe::Witness(_) => {
                    return Err(ExtremalError::InvalidResult(
                        "witness found below a proven lower bound",
                    ))
                }
                Probe::Clean | Probe::Unreachable => {}
            }
        }
    }
    if ascend {
        while lower < upper {
            match run.probe(lower + 1)? {
                Probe::Witness(w) => {
                    (witness, upper) = (w, lower);
                    run.cert.witness_source = Some(WitnessSource::ExhaustiveSearch);
                }
                Probe::Clean => lower += 1,
                Probe::Unreachable => {
                    if !sampled {
                        if let Some(w) = run.sample(upper)? {
                            (witness, upper) = (w, upper - 1);
                            run.cert.witness_source = Some(WitnessSource::RandomSearch);
                        }
                    }
                    break;
                }
            }
        }
    }

    let status = if lower == upper {
        Status::Exact
    } else if run.cert.random_trials > 0 || run.cert.exhaustive_clean_cap.is_some() {
        Status::Bounded
    } else {
        Status::Unknown
    };
    let value = if status == Status::Exact {
        Some(lower)
    } else {
        bounds
            .exact
            .map(|b| b.value)
            .filter(|&v| v >= lower && v <= upper)
    };
    Ok(LResult {
        m,
        n,
        status,
        lower,
        upper,
        value,
        witness: Some(witness),
        bounds,
        certificate: run.cert,
    })
}

/// Checks `L(m+1, n) <= L(m, n) <= L(m, n+1)` over every adjacent pair of
/// exact results. Non-exact results are ignored.
pub fn monotonicity_check(results: &[LResult]) -> bool {
    let table: alloc::vec::Vec<(usize, usize, usize)> = results
        .iter()
        .filter(|r| r.status == Status::Exact)
        .filter_map(|r| r.value.map(|v| (r.m, r.n, v)))
        .collect();
    monotone_table(&table)
}

/// [`monotonicity_check`] over raw `(m, n, L)` triples.
///
/// Adding a row can only make a latin transversal harder to find (any
/// witness extends by a row of fresh symbols), and deleting a column of an
/// `m x (n+1)` array keeps the cap, hence the two directions.
pub fn monotone_table(values: &[(usize, usize, usize)]) -> bool {
    let map: BTreeMap<(usize, usize), usize> =
        values.iter().map(|&(m, n, v)| ((m, n), v)).collect();
    map.iter().all(|(&(m, n), &v)| {
        let wider = map.get(&(m, n + 1)).is_none_or(|&w| v <= w);
        let taller = map.get(&(m + 1, n)).is_none_or(|&t| t <= v);
        wider && taller
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(m: usize, n: usize) -> LResult {
        let r = compute_l(m, n, &LBudget::default()).unwrap();
        r.verify().unwrap();
        r
    }

    #[test]
    fn small_exact_values() {
        for (m, n, v) in [(2, 2, 1), (2, 3, 5), (2, 4, 7), (3, 3, 2)] {
            let r = exact(m, n);
            assert_eq!((r.status, r.value), (Status::Exact, Some(v)), "({m},{n})");
        }
    }

    #[test]
    fn three_by_five_is_bounded() {
        let budget = LBudget {
            random_trials: 500,
            ..LBudget::default()
        };
        let r = compute_l(3, 5, &budget).unwrap();
        r.verify().unwrap();
        assert_eq!(r.status, Status::Bounded);
        assert_eq!(r.value, Some(7));
        assert_eq!(r.upper, 7);
        assert_eq!(r.certificate.witness_source, Some(WitnessSource::Flood));
        assert!(r.certificate.ceiling_hit);
        assert_eq!(r.certificate.random_trials, 500);
    }

    #[test]
    fn unknown_without_samples() {
        let budget = LBudget {
            random_trials: 0,
            ..LBudget::default()
        };
        let r = compute_l(4, 5, &budget).unwrap();
        assert_eq!(r.status, Status::Unknown);
        assert_eq!(r.upper, 4);
        assert_eq!(r.certificate.witness_source, Some(WitnessSource::Parker));
        r.verify().unwrap();
    }

    #[test]
    fn ascending_search_without_closed_form() {
        // No closed form at (4,5) and 20 cells is past the ceiling.
        let r = compute_l(
            4,
            5,
            &LBudget {
                random_trials: 200,
                ..LBudget::default()
            },
        )
        .unwrap();
        assert_eq!(r.status, Status::Bounded);
        assert!(r.lower >= 2 && r.upper == 4);
    }

    #[test]
    fn monotonicity_examples() {
        assert!(monotone_table(&[(2, 2, 1), (2, 3, 5), (3, 3, 2)]));
        assert!(monotone_table(&[(3, 3, 2), (3, 4, 3)]));
        assert!(!monotone_table(&[(2, 3, 5), (2, 4, 4)]));
        assert!(!monotone_table(&[(2, 3, 1), (3, 3, 2)]));
        assert!(monotone_table(&[]));
    }

    #[test]
    fn verify_catches_bad_results() {
        let mut r = exact(2, 3);
        r.upper = 6;
        assert!(r.verify().is_err());
        let mut r = exact(2, 3);
        r.witness = Some(crate::constructions::parker(2, 3).unwrap());
        assert!(r.verify().is_err());
        let mut r = exact(2, 3);
        r.lower = 4;
        assert!(r.verify().is_err());
    }
}
