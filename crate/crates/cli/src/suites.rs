//! Verification suites. Each one checks a family of grids and reports any
//! grid that breaks the expected property.
//!
//! Cases are independent and run in parallel; results are collected in case
//! order, so a report depends only on the seed and the trial count.

use std::time::Instant;

use lt_core::constructions::{
    flood, for_each_latin_square, hall_array, parker, random_exact_multiplicity, random_grid,
    random_latin_square, snevily_submatrix, BSequence, GroupSpec,
};
use lt_core::extremal::{lemma_checks, monotonicity_check, LBudget, Status, DEFAULT_CEILING};
use lt_core::grid::Grid;
use lt_core::rng::{seeded, trial_seed};
use lt_core::solver::{
    count_transversals, find_transversal, greedy_find, max_distinct_transversal, SearchConfig,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::format::serialize_grid;
use crate::parallel::compute_l_parallel;
use crate::report::SuiteReport;

pub const SUITES: [&str; 12] = [
    "thm1",
    "thm2",
    "thm4",
    "greedy",
    "hall",
    "snevily",
    "parity4",
    "parity6",
    "lemmas",
    "monotone",
    "stein063",
    "ryser-survey",
];

/// Exact `L` values reproduced by the `monotone` suite.
pub const EXACT_TABLE: [(usize, usize, usize); 6] = [
    (2, 2, 1),
    (2, 3, 5),
    (2, 4, 7),
    (2, 5, 9),
    (3, 3, 2),
    (3, 4, 3),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SuiteOptions {
    /// Overrides the suite's default sample size; ignored by exhaustive suites.
    pub trials: Option<u64>,
    pub seed: u64,
}

/// What one case produced.
enum Verdict {
    Pass,
    Fail(Grid),
    Error(String),
}

/// Runs `check` on every case in parallel and folds the verdicts, in order,
/// into `report`.
fn check_all<T, F>(report: &mut SuiteReport, cases: &[T], check: F)
where
    T: Sync,
    F: Fn(&T) -> Verdict + Sync + Send,
{
    let verdicts: Vec<Verdict> = cases.par_iter().map(check).collect();
    report.cases += cases.len() as u64;
    for v in verdicts {
        match v {
            Verdict::Pass => {}
            Verdict::Fail(g) => report.counterexamples.push(serialize_grid(&g)),
            Verdict::Error(e) => {
                report.error.get_or_insert(e);
            }
        }
    }
}

fn has_latin(g: &Grid) -> Result<bool, String> {
    find_transversal(g, &SearchConfig::default())
        .map(|t| t.is_some())
        .map_err(|e| e.to_string())
}

fn expect_latin(g: Grid) -> Verdict {
    match has_latin(&g) {
        Ok(true) => Verdict::Pass,
        Ok(false) => Verdict::Fail(g),
        Err(e) => Verdict::Error(e),
    }
}

fn expect_none(g: Grid) -> Verdict {
    match has_latin(&g) {
        Ok(false) => Verdict::Pass,
        Ok(true) => Verdict::Fail(g),
        Err(e) => Verdict::Error(e),
    }
}

fn expect_even(g: Grid) -> Verdict {
    match count_transversals(&g) {
        Ok(c) if c % 2 == 0 => Verdict::Pass,
        Ok(_) => Verdict::Fail(g),
        Err(e) => Verdict::Error(e.to_string()),
    }
}

/// Per-case seeds for `trials` cases on each of several shapes.
fn seeded_cases<S: Copy>(shapes: &[S], trials: u64, seed: u64) -> Vec<(S, u64)> {
    let mut out = Vec::new();
    for &s in shapes {
        for _ in 0..trials {
            out.push((s, trial_seed(seed, out.len() as u64)));
        }
    }
    out
}

/// Runs a suite by name; `None` for an unknown name.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Option<SuiteReport> {
    let start = Instant::now();
    let mut r = SuiteReport::new(name, opts.seed);
    let trials = |default: u64| opts.trials.unwrap_or(default);
    match name {
        "thm1" => thm1(&mut r),
        "thm2" => thm2(&mut r),
        "thm4" => thm4(&mut r, trials(1000), opts.seed),
        "greedy" => greedy(&mut r, trials(1000), opts.seed),
        "hall" => hall(&mut r, trials(100), opts.seed),
        "snevily" => snevily(&mut r, trials(10_000), opts.seed),
        "parity4" => parity4(&mut r),
        "parity6" => parity6(&mut r, trials(100), opts.seed),
        "lemmas" => lemmas(&mut r),
        "monotone" => monotone(&mut r, opts.seed),
        "stein063" => max_distinct_share(&mut r, trials(50), opts.seed),
        "ryser-survey" => ryser_survey(&mut r, trials(200), opts.seed),
        _ => return None,
    }
    r.settle();
    r.millis = start.elapsed().as_millis();
    Some(r)
}

fn thm1(r: &mut SuiteReport) {
    let shapes: Vec<(usize, usize)> = (3..=7)
        .flat_map(|m| (m..=2 * m - 2).map(move |n| (m, n)))
        .collect();
    check_all(r, &shapes, |&(m, n)| {
        let g = parker(m, n).expect("valid shape");
        if g.multiplicities().max_mult != n {
            return Verdict::Fail(g);
        }
        expect_none(g)
    });
}

fn thm2(r: &mut SuiteReport) {
    let shapes: Vec<(usize, usize)> = (2..=6)
        .flat_map(|m| (m..=12).map(move |n| (m, n)))
        .collect();
    check_all(r, &shapes, |&(m, n)| {
        let g = flood(m, n).expect("valid shape");
        let floor = (m * n - 1) / (m - 1);
        if g.num_symbols() != m - 1 || g.multiplicities().max_mult - 1 != floor {
            return Verdict::Fail(g);
        }
        expect_none(g)
    });
}

fn thm4(r: &mut SuiteReport, trials: u64, seed: u64) {
    let cases = seeded_cases(&[(4, 8), (5, 10), (6, 12)], trials, seed);
    check_all(r, &cases, |&((m, n), s)| {
        expect_latin(random_grid(m, n, n - m + 1, s).expect("valid"))
    });
}

fn greedy(r: &mut SuiteReport, trials: u64, seed: u64) {
    let cases = seeded_cases(&[(3usize, 7usize), (4, 10), (5, 13)], trials, seed);
    check_all(r, &cases, |&((m, n), s)| {
        let g = random_grid(m, n, (n - 1) / (m - 1), s).expect("valid");
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(&mut seeded(s ^ 1));
        match greedy_find(&g, &order) {
            Ok(Some(_)) => Verdict::Pass,
            Ok(None) => Verdict::Fail(g),
            Err(e) => Verdict::Error(e.to_string()),
        }
    });
}

fn hall_groups() -> Vec<GroupSpec> {
    let mut groups: Vec<GroupSpec> = (3..=10)
        .map(|n| GroupSpec::cyclic(n).expect("n >= 2"))
        .collect();
    for f in [vec![2, 2], vec![2, 4], vec![3, 3]] {
        groups.push(GroupSpec::new(f).expect("valid factors"));
    }
    groups
}

fn hall(r: &mut SuiteReport, trials: u64, seed: u64) {
    let groups = hall_groups();
    let idx: Vec<usize> = (0..groups.len()).collect();
    let cases = seeded_cases(&idx, trials, seed);
    check_all(r, &cases, |&(gi, s)| {
        let spec = &groups[gi];
        match hall_array(spec, &BSequence::random(spec, s)) {
            Ok(g) => expect_latin(g),
            Err(e) => Verdict::Error(e.to_string()),
        }
    });
}

/// All subsets of `0..n` of size `k`, in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn snevily_case(spec: &GroupSpec, rows: &[usize], cols: &[usize]) -> Verdict {
    match snevily_submatrix(spec, rows, cols) {
        Ok(g) if g.multiplicities().max_mult > rows.len() => Verdict::Fail(g),
        Ok(g) => expect_latin(g),
        Err(e) => Verdict::Error(e.to_string()),
    }
}

fn snevily(r: &mut SuiteReport, samples: u64, seed: u64) {
    for n in [3usize, 5, 7] {
        let spec = GroupSpec::cyclic(n).expect("n >= 2");
        let mut cases = Vec::new();
        for k in 2..n {
            let all = subsets(n, k);
            for rows in &all {
                for cols in &all {
                    cases.push((rows.clone(), cols.clone()));
                }
            }
        }
        check_all(r, &cases, |(rows, cols)| snevily_case(&spec, rows, cols));
    }
    let z9 = GroupSpec::cyclic(9).expect("9 >= 2");
    let seeds: Vec<u64> = (0..samples).map(|i| trial_seed(seed, i)).collect();
    check_all(r, &seeds, |&s| {
        let mut rng = seeded(s);
        let k = rng.gen_range(2..9);
        let all: Vec<usize> = (0..9).collect();
        let rows: Vec<usize> = all.choose_multiple(&mut rng, k).copied().collect();
        let cols: Vec<usize> = all.choose_multiple(&mut rng, k).copied().collect();
        snevily_case(&z9, &rows, &cols)
    });
}

fn parity4(r: &mut SuiteReport) {
    let mut squares = Vec::new();
    for_each_latin_square(4, |g| squares.push(g.clone()));
    check_all(r, &squares, |g| expect_even(g.clone()));
}

fn parity6(r: &mut SuiteReport, trials: u64, seed: u64) {
    let seeds: Vec<u64> = (0..trials).map(|i| trial_seed(seed, i)).collect();
    check_all(r, &seeds, |&s| expect_even(random_latin_square(6, s)));
}

fn lemmas(r: &mut SuiteReport) {
    match lemma_checks(4, DEFAULT_CEILING) {
        Ok(rep) => {
            r.cases = rep.enumerated;
            for (name, o) in [
                ("pinned configuration", &rep.pinned_configuration),
                ("rare symbol", &rep.rare_symbol),
            ] {
                r.notes.push(format!(
                    "{name}: {} grids checked, {} violations",
                    o.checked, o.violations
                ));
                r.counterexamples
                    .extend(o.counterexamples.iter().map(serialize_grid));
                if o.violations > o.counterexamples.len() as u64 {
                    r.error
                        .get_or_insert(format!("{name}: more violations than kept"));
                }
            }
        }
        Err(e) => r.error = Some(e.to_string()),
    }
}

fn monotone(r: &mut SuiteReport, seed: u64) {
    let budget = LBudget {
        seed,
        ..LBudget::default()
    };
    let results: Vec<_> = EXACT_TABLE
        .par_iter()
        .map(|&(m, n, _)| compute_l_parallel(m, n, &budget))
        .collect();
    r.cases = EXACT_TABLE.len() as u64;
    let mut ok = Vec::new();
    for (&(m, n, want), res) in EXACT_TABLE.iter().zip(results) {
        match res {
            Ok(res) if res.status == Status::Exact && res.value == Some(want) => {
                r.notes.push(format!("L({m},{n}) = {want}"));
                ok.push(res);
            }
            Ok(res) => {
                r.error.get_or_insert(format!(
                    "L({m},{n}): expected exact {want}, got {} in [{}, {}]",
                    res.status.as_str(),
                    res.lower,
                    res.upper
                ));
            }
            Err(e) => {
                r.error.get_or_insert(format!("L({m},{n}): {e}"));
            }
        }
    }
    if r.error.is_none() && !monotonicity_check(&ok) {
        r.error = Some("exact table is not monotone".into());
    }
}

/// Required share of `stein063` grids reaching five distinct symbols: 48 of 50.
fn distinct_required(trials: u64) -> u64 {
    trials - trials / 25
}

fn max_distinct_share(r: &mut SuiteReport, trials: u64, seed: u64) {
    let seeds: Vec<u64> = (0..trials).map(|i| trial_seed(seed, i)).collect();
    let results: Vec<_> = seeds
        .par_iter()
        .map(|&s| {
            let g = random_exact_multiplicity(8, 8, 8, s).expect("64 cells in blocks of 8");
            let d = max_distinct_transversal(&g, &SearchConfig::default());
            (g, d)
        })
        .collect();
    r.cases = trials;
    let mut low = Vec::new();
    let mut reached = 0;
    for (g, d) in results {
        match d {
            Ok(p) if p.distinct >= 5 => reached += 1,
            Ok(_) => low.push(g),
            Err(e) => {
                r.error.get_or_insert(e.to_string());
            }
        }
    }
    r.notes
        .push(format!("{reached}/{trials} grids reach 5 distinct symbols"));
    if reached < distinct_required(trials) {
        r.counterexamples.extend(low.iter().map(serialize_grid));
    }
}

fn ryser_survey(r: &mut SuiteReport, trials: u64, seed: u64) {
    let seeds: Vec<u64> = (0..trials).map(|i| trial_seed(seed, i)).collect();
    let counts: Vec<_> = seeds
        .par_iter()
        .map(|&s| count_transversals(&random_latin_square(7, s)))
        .collect();
    r.cases = trials;
    let (mut even, mut odd) = (0, 0);
    for c in counts {
        match c {
            Ok(c) if c % 2 == 0 => even += 1,
            Ok(_) => odd += 1,
            Err(e) => {
                r.error.get_or_insert(e.to_string());
            }
        }
    }
    r.notes.push(format!(
        "order-7 transversal counts: {odd} odd, {even} even"
    ));
    if even > 0 {
        r.notes
            .push("found an order-7 square with an even count".into());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_binomial() {
        assert_eq!(subsets(5, 2).len(), 10);
        assert_eq!(subsets(7, 3).len(), 35);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("thm9", &SuiteOptions::default()).is_none());
    }

    #[test]
    fn small_suites_pass_and_are_seed_stable() {
        let opts = SuiteOptions {
            trials: Some(20),
            seed: 5,
        };
        for name in ["thm1", "thm2", "thm4", "greedy", "hall", "parity6"] {
            let a = run_suite(name, &opts).unwrap();
            assert!(a.pass, "{name}: {a:?}");
            let b = run_suite(name, &opts).unwrap();
            assert_eq!(
                (a.cases, a.counterexamples, a.notes),
                (b.cases, b.counterexamples, b.notes)
            );
        }
    }

    #[test]
    fn distinct_share_threshold() {
        assert_eq!(distinct_required(50), 48);
        assert_eq!(distinct_required(10), 10);
    }
}
