use std::io::Write;
use std::process::{Command, Output, Stdio};

use lt_cli::format::{parse_grid, parse_transversal};

fn lt(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lt"))
        .args(args)
        .env("LT_WORKERS", "2")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn parker_pipeline_has_no_transversal() {
    let grid = lt(&["construct", "parker", "4", "4"], "");
    assert!(grid.status.success());
    let solved = lt(&["solve", "-"], &stdout(&grid));
    assert_eq!(solved.status.code(), Some(1));
    assert_eq!(stdout(&solved), "NONE\n");
}

#[test]
fn lvalue_three_by_three() {
    let o = lt(&["lvalue", "3", "3", "--exact"], "");
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("status  exact\n"), "{text}");
    assert!(text.contains("value   2\n"), "{text}");
}

#[test]
fn parity4_suite() {
    let o = lt(&["verify", "parity4", "--json"], "");
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["cases"], 576);
    assert_eq!(v["suite"], "parity4");
}

#[test]
fn suites_are_reproducible_from_the_seed() {
    let a = lt(
        &["verify", "thm4", "--trials", "30", "--seed", "9", "--json"],
        "",
    );
    let b = lt(
        &["verify", "thm4", "--trials", "30", "--seed", "9", "--json"],
        "",
    );
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_str(stdout(o).trim()).unwrap();
        v.as_object_mut().unwrap().remove("millis");
        v
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a)["seed"], 9);
}

#[test]
fn solve_output_verifies() {
    for args in [
        vec!["construct", "random", "5", "7", "3", "--seed", "4"],
        vec!["construct", "table", "5"],
        vec!["construct", "hall", "2,2", "--b", "1,2,3"],
    ] {
        let text = stdout(&lt(&args, ""));
        let g = parse_grid(&text).unwrap();
        for mode in [
            &[][..],
            &["--greedy"][..],
            &["--resample", "--seed", "3"][..],
        ] {
            if mode.contains(&"--resample") && g.rows() != g.cols() {
                assert_eq!(
                    lt(&["solve", "--resample", "-"], &text).status.code(),
                    Some(2)
                );
                continue;
            }
            let mut solve = vec!["solve"];
            solve.extend_from_slice(mode);
            solve.push("-");
            let o = lt(&solve, &text);
            let out = stdout(&o);
            if out.trim() == "UNKNOWN" {
                assert!(!mode.is_empty());
                continue;
            }
            assert!(o.status.success(), "{args:?} {mode:?}: {out}");
            let t = parse_transversal(&out).unwrap();
            assert!(g.verify_transversal(&t, true).unwrap(), "{args:?} {mode:?}");
        }
    }
}

#[test]
fn solve_reads_files() {
    let dir = std::env::temp_dir().join(format!("lt-cli-files-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z3.grid");
    std::fs::write(&path, "# cyclic table\n3 3\na b c\nb c a\nc a b\n").unwrap();
    let o = lt(&["solve", "--count", path.to_str().unwrap()], "");
    assert_eq!(stdout(&o), "3\n");
    let o = lt(&["solve", dir.join("missing").to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("lt-cli-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cache.jsonl");
    let file = path.to_str().unwrap();
    for (m, n) in [("2", "3"), ("3", "3"), ("3", "5"), ("4", "7")] {
        let o = lt(
            &["lvalue", m, n, "--trials", "100", "--save", "--file", file],
            "",
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let o = lt(&["cache", "recheck", "--file", file], "");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "4 records, 0 invalid\n");
    let shown = stdout(&lt(&["cache", "show", "--file", file], ""));
    assert_eq!(shown.lines().count(), 4);
    assert!(shown.contains("L(3,3)  exact    value 2"), "{shown}");

    let mut text = std::fs::read_to_string(&path).unwrap();
    text = text.replacen("\"upper\":2", "\"upper\":1", 1);
    std::fs::write(&path, text + "not json\n").unwrap();
    let o = lt(&["cache", "recheck", "--file", file], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).ends_with("2 invalid\n"), "{}", stdout(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lt(&["verify", "nope"], "").status.code(), Some(2));
    assert_eq!(lt(&["solve", "-"], "3 3\n1 2\n").status.code(), Some(2));
    assert_eq!(lt(&["frobnicate"], "").status.code(), Some(2));
}
