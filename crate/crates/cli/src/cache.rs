//! Newline-delimited JSON records of computed `L(m, n)` results.
//!
//! Each line is one self-contained record, so the file is append-only and a
//! torn final line only loses that record. Later records for the same shape
//! supersede earlier ones.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use lt_core::extremal::{
    Bound, Certificate, ExtremalError, LBounds, LResult, Provenance, Status, WitnessSource,
};
use serde::{Deserialize, Serialize};

use crate::format::{parse_grid, serialize_grid};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Cache path from `LT_CACHE`, else `lt-cache.jsonl` in the working directory.
pub fn default_path() -> PathBuf {
    std::env::var_os("LT_CACHE").map_or_else(|| PathBuf::from("lt-cache.jsonl"), PathBuf::from)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub value: usize,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub exhaustive_clean_cap: Option<usize>,
    pub grids_enumerated: u64,
    pub random_cap: Option<usize>,
    pub random_trials: u64,
    pub ceiling_hit: bool,
    pub witness_source: Option<String>,
}

/// Serialized form of an [`LResult`]; the witness is kept in the grid format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LRecord {
    pub m: usize,
    pub n: usize,
    pub status: String,
    pub lower: usize,
    pub upper: usize,
    pub value: Option<usize>,
    pub witness: Option<String>,
    pub bounds: BoundsRecord,
    pub conjecture: Option<usize>,
    pub certificate: CertificateRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub lower: BoundRecord,
    pub upper: BoundRecord,
    pub exact: Option<BoundRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub result: LRecord,
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("cache i/o error: {0}")]
    Io(#[from] io::Error),
}

impl From<&Bound> for BoundRecord {
    fn from(b: &Bound) -> Self {
        BoundRecord {
            value: b.value,
            provenance: b.provenance.as_str().into(),
        }
    }
}

impl From<&LBounds> for BoundsRecord {
    fn from(b: &LBounds) -> Self {
        BoundsRecord {
            lower: (&b.lower).into(),
            upper: (&b.upper).into(),
            exact: b.exact.as_ref().map(Into::into),
        }
    }
}

impl From<&LResult> for LRecord {
    fn from(r: &LResult) -> Self {
        let c = &r.certificate;
        LRecord {
            m: r.m,
            n: r.n,
            status: r.status.as_str().into(),
            lower: r.lower,
            upper: r.upper,
            value: r.value,
            witness: r.witness.as_ref().map(serialize_grid),
            bounds: (&r.bounds).into(),
            conjecture: lt_core::extremal::conjectured_value(r.m, r.n),
            certificate: CertificateRecord {
                exhaustive_clean_cap: c.exhaustive_clean_cap,
                grids_enumerated: c.grids_enumerated,
                random_cap: c.random_cap,
                random_trials: c.random_trials,
                ceiling_hit: c.ceiling_hit,
                witness_source: c.witness_source.map(|s| s.as_str().into()),
            },
        }
    }
}

fn bound(b: &BoundRecord) -> Result<Bound, String> {
    let provenance = Provenance::parse(&b.provenance)
        .ok_or_else(|| format!("unknown provenance {:?}", b.provenance))?;
    Ok(Bound {
        value: b.value,
        provenance,
    })
}

impl LRecord {
    pub fn to_result(&self) -> Result<LResult, String> {
        let status = Status::parse(&self.status)
            .ok_or_else(|| format!("unknown status {:?}", self.status))?;
        let witness = match &self.witness {
            Some(text) => Some(parse_grid(text).map_err(|e| format!("witness: {e}"))?),
            None => None,
        };
        let c = &self.certificate;
        let witness_source = match &c.witness_source {
            Some(s) => Some(
                WitnessSource::parse(s).ok_or_else(|| format!("unknown witness source {s:?}"))?,
            ),
            None => None,
        };
        Ok(LResult {
            m: self.m,
            n: self.n,
            status,
            lower: self.lower,
            upper: self.upper,
            value: self.value,
            witness,
            bounds: LBounds {
                lower: bound(&self.bounds.lower)?,
                upper: bound(&self.bounds.upper)?,
                exact: self.bounds.exact.as_ref().map(bound).transpose()?,
            },
            certificate: Certificate {
                exhaustive_clean_cap: c.exhaustive_clean_cap,
                grids_enumerated: c.grids_enumerated,
                random_cap: c.random_cap,
                random_trials: c.random_trials,
                ceiling_hit: c.ceiling_hit,
                witness_source,
            },
        })
    }
}

impl CacheRecord {
    pub fn now(result: &LResult) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        CacheRecord {
            version: TOOL_VERSION.into(),
            timestamp,
            result: result.into(),
        }
    }
}

/// One line of a cache file: a record, or why it could not be read.
pub type Line = Result<CacheRecord, CacheError>;

pub fn append(path: &Path, record: &CacheRecord) -> io::Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    let mut line = serde_json::to_string(record).map_err(io::Error::other)?;
    line.push('\n');
    f.write_all(line.as_bytes())
}

pub fn read_lines(path: &Path) -> io::Result<Vec<Line>> {
    let f = File::open(path)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).map_err(|e| CacheError::Malformed {
                line: i + 1,
                message: e.to_string(),
            }),
        );
    }
    Ok(out)
}

/// Latest record per shape.
#[derive(Debug, Clone, Default)]
pub struct ResultsCache {
    pub entries: BTreeMap<(usize, usize), CacheRecord>,
}

impl ResultsCache {
    /// Loads every readable record; unreadable lines are returned separately.
    pub fn load(path: &Path) -> io::Result<(Self, Vec<CacheError>)> {
        let mut cache = ResultsCache::default();
        let mut bad = Vec::new();
        for line in read_lines(path)? {
            match line {
                Ok(rec) => {
                    cache.entries.insert((rec.result.m, rec.result.n), rec);
                }
                Err(e) => bad.push(e),
            }
        }
        Ok((cache, bad))
    }
}

/// Re-verifies a record: it must decode, satisfy the result invariants, and
/// carry a valid witness.
pub fn recheck(rec: &CacheRecord) -> Result<(), String> {
    let r = rec.result.to_result()?;
    if r.bounds != lt_core::extremal::theorem_bounds(r.m, r.n).map_err(|e| e.to_string())? {
        return Err("stored theorem bounds differ from the closed forms".into());
    }
    r.verify().map_err(|e: ExtremalError| e.to_string())
}
