//! Suite reports, human-readable or as one JSON object per line.

use serde_json::json;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub cases: u64,
    /// Failing grids in the grid file format.
    pub counterexamples: Vec<String>,
    pub seed: u64,
    pub millis: u128,
    /// Diagnostics shown in the human-readable form only.
    pub notes: Vec<String>,
    /// A failure that is not a grid (a solver error, a violated table check).
    pub error: Option<String>,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            pass: true,
            cases: 0,
            counterexamples: Vec::new(),
            seed,
            millis: 0,
            notes: Vec::new(),
            error: None,
        }
    }

    /// Recomputes `pass` from the counterexamples and the error.
    pub fn settle(&mut self) {
        self.pass = self.counterexamples.is_empty() && self.error.is_none();
    }
}

pub fn emit_report(report: &SuiteReport, json: bool) -> String {
    if json {
        return json!({
            "suite": report.suite,
            "pass": report.pass,
            "cases": report.cases,
            "counterexamples": report.counterexamples,
            "seed": report.seed,
            "millis": report.millis,
        })
        .to_string();
    }
    let mut out = format!(
        "suite   {}\nresult  {}\ncases   {}\nseed    {}\ntime    {} ms",
        report.suite,
        if report.pass { "PASS" } else { "FAIL" },
        report.cases,
        report.seed,
        report.millis
    );
    for note in &report.notes {
        out.push_str(&format!("\nnote    {note}"));
    }
    if let Some(e) = &report.error {
        out.push_str(&format!("\nerror   {e}"));
    }
    for (i, g) in report.counterexamples.iter().enumerate() {
        out.push_str(&format!("\n# counterexample {}\n{g}", i + 1));
    }
    out
}
