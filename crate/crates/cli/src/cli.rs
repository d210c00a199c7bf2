//! The `lt` command line.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use lt_core::constructions::{
    flood, group_table, hall_array, parker, random_grid, snevily_submatrix, BSequence, GroupSpec,
};
use lt_core::extremal::{
    conjectured_value, theorem_bounds, Bound, LBudget, LResult, DEFAULT_CEILING,
};
use lt_core::grid::Grid;
use lt_core::solver::{
    count_transversals, find_transversal, greedy_find, resample_find, SearchConfig, SolveError,
};

use crate::cache::{self, CacheRecord, LRecord, ResultsCache};
use crate::format::{format_transversal, parse_grid, serialize_grid};
use crate::parallel::compute_l_parallel;
use crate::report::emit_report;
use crate::suites::{run_suite, SuiteOptions, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "lt", version, about = "Latin transversals of m x n arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a latin transversal of a grid file ("-" reads stdin).
    Solve(SolveArgs),
    /// Bounds on or the value of L(m, n).
    Lvalue(LvalueArgs),
    /// Write a constructed grid to stdout.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Inspect the results cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    file: String,
    /// Print the exact number of latin transversals.
    #[arg(long, conflicts_with_all = ["greedy", "resample"])]
    count: bool,
    /// First-fit in row order; may miss transversals.
    #[arg(long, conflicts_with = "resample")]
    greedy: bool,
    /// Randomized resampling; may give up.
    #[arg(long)]
    resample: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    max_iters: u64,
}

#[derive(Args, Debug)]
struct LvalueArgs {
    m: usize,
    n: usize,
    /// Search for the value (the default).
    #[arg(long, conflicts_with = "bounds")]
    exact: bool,
    /// Print only the closed-form bounds.
    #[arg(long)]
    bounds: bool,
    /// Wall-clock seconds allowed per search.
    #[arg(long)]
    budget: Option<f64>,
    /// Largest exhaustive enumeration allowed per cap.
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: u128,
    /// Random grids tried where exhaustive search cannot reach.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    /// Append the result to the cache.
    #[arg(long, conflicts_with = "bounds")]
    save: bool,
    /// Cache file (default: $LT_CACHE or ./lt-cache.jsonl).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ConstructKind {
    /// Every symbol n times and no latin transversal when n <= 2m - 2.
    Parker { m: usize, n: usize },
    /// m - 1 symbols filling every cell as evenly as possible.
    Flood { m: usize, n: usize },
    /// Addition table of a group such as "5" or "2,2".
    Table { spec: GroupSpec },
    /// Rows b_i + a_j for a sequence of element indices.
    Hall {
        spec: GroupSpec,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<usize>,
    },
    /// Submatrix of an odd-order group table.
    Snevily {
        spec: GroupSpec,
        #[arg(long, value_delimiter = ',', required = true)]
        rows: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        cols: Vec<usize>,
    },
    /// Random grid with every symbol at most k times.
    Random {
        m: usize,
        n: usize,
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    suite: String,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Latest record per shape.
    Show {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Re-verify every record and its witness.
    Recheck {
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

/// Output streams and stdin for one invocation.
struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// A failed invocation: exit code and message for stderr.
struct Failure(i32, String);

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure(EXIT_USAGE, msg.to_string())
}

type Outcome = Result<i32, Failure>;

/// Runs `lt` with the given arguments (the first is the program name) and
/// returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let mut io = Io { stdin, out, err };
    let result = match cli.command {
        Command::Solve(a) => solve(&a, &mut io),
        Command::Lvalue(a) => lvalue(&a, &mut io),
        Command::Construct { kind } => construct(&kind, &mut io),
        Command::Verify(a) => verify(&a, &mut io),
        Command::Cache { action } => cache_cmd(&action, &mut io),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(io.err, "lt: {msg}");
            code
        }
    }
}

fn io_fail(e: std::io::Error) -> Failure {
    Failure(EXIT_FAIL, e.to_string())
}

fn read_grid(path: &str, io: &mut Io) -> Result<Grid, Failure> {
    let mut text = String::new();
    if path == "-" {
        io.stdin
            .read_to_string(&mut text)
            .map_err(|e| usage(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    }
    parse_grid(&text).map_err(|e| usage(format!("{path}: {e}")))
}

fn solve_error(e: SolveError) -> Failure {
    match e {
        SolveError::BudgetExhausted { .. } => Failure(EXIT_FAIL, e.to_string()),
        _ => usage(e),
    }
}

fn solve(a: &SolveArgs, io: &mut Io) -> Outcome {
    let g = read_grid(&a.file, io)?;
    if a.count {
        let c = count_transversals(&g).map_err(solve_error)?;
        writeln!(io.out, "{c}").map_err(io_fail)?;
        return Ok(if c == 0 { EXIT_FAIL } else { EXIT_OK });
    }
    let cfg = SearchConfig {
        seed: a.seed,
        max_iters: a.max_iters,
        ..SearchConfig::default()
    };
    // None: proven absent. Some(None): the heuristic gave up.
    let found = if a.greedy {
        let order: Vec<usize> = (0..g.rows()).collect();
        Some(greedy_find(&g, &order).map_err(solve_error)?)
    } else if a.resample {
        Some(resample_find(&g, &cfg).map_err(solve_error)?.transversal)
    } else {
        find_transversal(&g, &cfg).map_err(solve_error)?.map(Some)
    };
    match found {
        Some(Some(t)) => {
            writeln!(io.out, "{}", format_transversal(&g, &t)).map_err(io_fail)?;
            Ok(EXIT_OK)
        }
        Some(None) => {
            writeln!(io.out, "UNKNOWN").map_err(io_fail)?;
            Ok(EXIT_FAIL)
        }
        None => {
            writeln!(io.out, "NONE").map_err(io_fail)?;
            Ok(EXIT_FAIL)
        }
    }
}

fn show_bound(b: &Bound) -> String {
    format!("{} ({})", b.value, b.provenance.as_str())
}

fn describe(r: &LResult) -> String {
    let mut s = format!("L({},{})\nstatus  {}\n", r.m, r.n, r.status.as_str());
    match r.value {
        Some(v) => s.push_str(&format!("value   {v}\n")),
        None => s.push_str("value   -\n"),
    }
    s.push_str(&format!("lower   {}\nupper   {}\n", r.lower, r.upper));
    s.push_str(&format!(
        "closed-form lower {}\nclosed-form upper {}\n",
        show_bound(&r.bounds.lower),
        show_bound(&r.bounds.upper)
    ));
    if let Some(e) = &r.bounds.exact {
        s.push_str(&format!("known value {}\n", show_bound(e)));
    }
    if let Some(c) = conjectured_value(r.m, r.n) {
        s.push_str(&format!("conjecture {c}\n"));
    }
    let c = &r.certificate;
    if let Some(k) = c.exhaustive_clean_cap {
        s.push_str(&format!(
            "exhaustive: every grid with cap {k} has a latin transversal\n"
        ));
    }
    if c.grids_enumerated > 0 {
        s.push_str(&format!("grids enumerated {}\n", c.grids_enumerated));
    }
    if let Some(k) = c.random_cap {
        s.push_str(&format!(
            "random: {} grids with cap {k} all have latin transversals\n",
            c.random_trials
        ));
    }
    if c.ceiling_hit {
        s.push_str("enumeration ceiling reached\n");
    }
    if let Some(w) = &r.witness {
        let source = c.witness_source.map_or("", |s| s.as_str());
        s.push_str(&format!("witness ({source})\n{}\n", serialize_grid(w)));
    }
    s
}

fn lvalue(a: &LvalueArgs, io: &mut Io) -> Outcome {
    if a.bounds {
        let b = theorem_bounds(a.m, a.n).map_err(usage)?;
        let text = if a.json {
            serde_json::to_string(&crate::cache::BoundsRecord::from(&b))
                .map_err(|e| Failure(EXIT_FAIL, e.to_string()))?
        } else {
            let mut t = format!(
                "L({},{})\nlower   {}\nupper   {}",
                a.m,
                a.n,
                show_bound(&b.lower),
                show_bound(&b.upper)
            );
            if let Some(e) = &b.exact {
                t.push_str(&format!("\nknown   {}", show_bound(e)));
            }
            if let Some(c) = conjectured_value(a.m, a.n) {
                t.push_str(&format!("\nconjecture {c}"));
            }
            t
        };
        writeln!(io.out, "{text}").map_err(io_fail)?;
        return Ok(EXIT_OK);
    }
    let time_budget = match a.budget {
        Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
        Some(s) => return Err(usage(format!("invalid budget {s}"))),
        None => None,
    };
    let budget = LBudget {
        ceiling: a.ceiling,
        random_trials: a.trials,
        seed: a.seed,
        time_budget,
    };
    let r = compute_l_parallel(a.m, a.n, &budget).map_err(usage)?;
    if a.save {
        let path = a.file.clone().unwrap_or_else(cache::default_path);
        cache::append(&path, &CacheRecord::now(&r)).map_err(io_fail)?;
    }
    if a.json {
        let line = serde_json::to_string(&LRecord::from(&r))
            .map_err(|e| Failure(EXIT_FAIL, e.to_string()))?;
        writeln!(io.out, "{line}").map_err(io_fail)?;
    } else {
        write!(io.out, "{}", describe(&r)).map_err(io_fail)?;
    }
    Ok(EXIT_OK)
}

fn construct(kind: &ConstructKind, io: &mut Io) -> Outcome {
    let g = match kind {
        ConstructKind::Parker { m, n } => parker(*m, *n),
        ConstructKind::Flood { m, n } => flood(*m, *n),
        ConstructKind::Table { spec } => Ok(group_table(spec)),
        ConstructKind::Hall { spec, b } => hall_array(spec, &BSequence::new(b.clone())),
        ConstructKind::Snevily { spec, rows, cols } => snevily_submatrix(spec, rows, cols),
        ConstructKind::Random { m, n, k, seed } => random_grid(*m, *n, *k, *seed),
    }
    .map_err(usage)?;
    writeln!(io.out, "{}", serialize_grid(&g)).map_err(io_fail)?;
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, io: &mut Io) -> Outcome {
    let opts = SuiteOptions {
        trials: a.trials,
        seed: a.seed,
    };
    let report =
        run_suite(&a.suite, &opts).ok_or_else(|| usage(format!("unknown suite {}", a.suite)))?;
    writeln!(io.out, "{}", emit_report(&report, a.json)).map_err(io_fail)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

fn cache_cmd(action: &CacheAction, io: &mut Io) -> Outcome {
    let (CacheAction::Show { file } | CacheAction::Recheck { file }) = action;
    let path = file.clone().unwrap_or_else(cache::default_path);
    let (cache, bad) =
        ResultsCache::load(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    match action {
        CacheAction::Show { .. } => {
            for rec in cache.entries.values() {
                let r = &rec.result;
                let value = r.value.map_or_else(|| "-".to_string(), |v| v.to_string());
                writeln!(
                    io.out,
                    "L({},{})  {:<7}  value {value}  [{}, {}]  v{} @{}",
                    r.m, r.n, r.status, r.lower, r.upper, rec.version, rec.timestamp
                )
                .map_err(io_fail)?;
            }
            for e in &bad {
                writeln!(io.err, "skipped {e}").map_err(io_fail)?;
            }
            Ok(EXIT_OK)
        }
        CacheAction::Recheck { .. } => {
            let mut invalid = bad.len();
            for e in &bad {
                writeln!(io.out, "invalid {e}").map_err(io_fail)?;
            }
            for rec in cache.entries.values() {
                if let Err(e) = cache::recheck(rec) {
                    invalid += 1;
                    writeln!(io.out, "invalid L({},{}): {e}", rec.result.m, rec.result.n)
                        .map_err(io_fail)?;
                }
            }
            writeln!(
                io.out,
                "{} records, {invalid} invalid",
                cache.entries.len() + bad.len()
            )
            .map_err(io_fail)?;
            Ok(if invalid == 0 { EXIT_OK } else { EXIT_FAIL })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("lt").chain(args.iter().copied());
        let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn construct_then_solve() {
        let (code, grid, _) = call(&["construct", "parker", "4", "4"], "");
        assert_eq!(code, 0);
        assert_eq!(call(&["solve", "-"], &grid).0, 1);
        assert_eq!(call(&["solve", "-"], &grid).1, "NONE\n");
        let (_, table, _) = call(&["construct", "table", "3"], "");
        assert_eq!(
            call(&["solve", "--count", "-"], &table),
            (0, "3\n".into(), String::new())
        );
    }

    #[test]
    fn heuristics_report_unknown() {
        let (_, grid, _) = call(&["construct", "parker", "3", "3"], "");
        assert_eq!(call(&["solve", "--greedy", "-"], &grid).1, "UNKNOWN\n");
        assert_eq!(
            call(&["solve", "--resample", "--max-iters", "50", "-"], &grid).1,
            "UNKNOWN\n"
        );
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&[], "").0, 2);
        assert_eq!(call(&["verify", "thm9"], "").0, 2);
        assert_eq!(call(&["solve", "-"], "2 2\n1 2\n").0, 2);
        assert_eq!(call(&["construct", "parker", "1", "4"], "").0, 2);
        assert_eq!(call(&["construct", "table", "2,x"], "").0, 2);
        assert_eq!(call(&["lvalue", "3", "2"], "").0, 2);
        assert_eq!(call(&["--help"], "").0, 0);
    }

    #[test]
    fn lvalue_modes() {
        let (code, out, _) = call(&["lvalue", "2", "3"], "");
        assert_eq!(code, 0);
        assert!(out.contains("status  exact\nvalue   5\n"), "{out}");
        let (_, out, _) = call(&["lvalue", "4", "7", "--bounds"], "");
        assert!(out.contains("upper   8 (cited-no-witness)"), "{out}");
        let (_, out, _) = call(&["lvalue", "2", "2", "--json"], "");
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["value"], 1);
        assert_eq!(v["status"], "exact");
    }

    #[test]
    fn construct_lists() {
        let (_, out, _) = call(
            &[
                "construct",
                "snevily",
                "5",
                "--rows",
                "0,1",
                "--cols",
                "0,2",
            ],
            "",
        );
        assert_eq!(out, "2 2\n0 2\n1 3\n");
        let (_, out, _) = call(&["construct", "hall", "3", "--b", "0,1"], "");
        assert_eq!(out, "2 3\n0 1 2\n1 2 0\n");
    }
}
