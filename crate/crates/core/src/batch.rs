//! Run configuration and batch verification over every special partition
//! of the requested sizes.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{PrimeField, MERSENNE_61};
use crate::partition::{enumerate_special, Partition};
use crate::pencil::Mode;
use crate::witness::{verify, Route, Status, WitnessReport};

/// JSON schema version stamped on every report.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeChoice {
    /// Exact up to `exact_size_cap`, numeric above.
    #[default]
    Auto,
    Exact,
    Numeric,
}

impl std::str::FromStr for ModeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(ModeChoice::Auto),
            "exact" => Ok(ModeChoice::Exact),
            "numeric" => Ok(ModeChoice::Numeric),
            _ => Err(Error::Config(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub mode: ModeChoice,
    /// Random points per identity in numeric mode.
    pub trials: usize,
    pub seed: u64,
    /// Field modulus for numeric mode; a prime in `(2^60, 2^63)`.
    pub prime: u64,
    /// Largest `2N` verified exactly under [`ModeChoice::Auto`].
    pub exact_size_cap: usize,
    /// Record wall-clock time per item. Off by default so that reports
    /// are reproducible byte for byte.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: ModeChoice::Auto,
            trials: 20,
            seed: 0,
            prime: MERSENNE_61,
            exact_size_cap: 8,
            timing: false,
        }
    }
}

impl RunConfig {
    /// The concrete mode for a partition of `two_n`.
    pub fn mode_for(&self, two_n: usize) -> Result<Mode> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        let field = PrimeField::new(self.prime)?;
        // A nonzero polynomial of degree <= 2N vanishes at a random point
        // with probability <= 2N / p; keep that well below 1 / trials.
        if (self.prime as u128) <= 2 * (two_n as u128) * (self.trials as u128) {
            return Err(Error::Config(format!(
                "prime {} too small for size {two_n} with {} trials",
                self.prime, self.trials
            )));
        }
        let exact = match self.mode {
            ModeChoice::Exact => true,
            ModeChoice::Numeric => false,
            ModeChoice::Auto => two_n <= self.exact_size_cap,
        };
        Ok(if exact {
            Mode::Exact
        } else {
            Mode::Numeric {
                trials: self.trials,
                seed: self.seed,
                field,
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchItem {
    pub partition: Partition,
    pub j: usize,
    pub status: Status,
    pub mode: &'static str,
    pub route: Option<Route>,
    pub b_j: Option<usize>,
    pub sign: Option<i32>,
    pub det_sign: Option<i32>,
    pub failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_ms: Option<u64>,
}

impl BatchItem {
    fn from_report(r: &WitnessReport, time_ms: Option<u64>) -> Self {
        BatchItem {
            partition: r.partition.clone(),
            j: r.j,
            status: r.status,
            mode: r.mode,
            route: Some(r.route),
            b_j: Some(r.b_j),
            sign: r.sign,
            det_sign: r.det_sign,
            failure: r.failure.clone(),
            time_ms,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchReport {
    pub schema: u32,
    pub sizes: Vec<usize>,
    pub items: Vec<BatchItem>,
    pub summary: Summary,
}

impl BatchReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Worker count from `PFLAB_THREADS`, if set.
pub fn thread_limit() -> Result<Option<usize>> {
    match std::env::var("PFLAB_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| Error::Config(format!("PFLAB_THREADS={v:?} is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

fn run_one(p: &Partition, j: usize, mode: &Mode, timing: bool) -> Result<BatchItem> {
    let start = Instant::now();
    let result = verify(p, j, mode);
    let time_ms = timing.then(|| start.elapsed().as_millis() as u64);
    match result {
        Ok(r) => Ok(BatchItem::from_report(&r, time_ms)),
        Err(e) if e.is_verification_failure() => Ok(BatchItem {
            partition: p.clone(),
            j,
            status: Status::Fail,
            mode: if mode.is_exact() { "exact" } else { "numeric" },
            route: None,
            b_j: None,
            sign: None,
            det_sign: None,
            failure: Some(e.to_string()),
            time_ms,
        }),
        Err(e) => Err(e),
    }
}

/// Verifies every `(P, j)` with `P` special of a listed size and `j` a
/// conjecture index. Items are reported in input order.
pub fn run_batch(config: &RunConfig, sizes: &[usize]) -> Result<BatchReport> {
    let mut jobs = Vec::new();
    for &two_n in sizes {
        let mode = config.mode_for(two_n)?;
        for p in enumerate_special(two_n)? {
            for j in p.conjecture_indices()? {
                jobs.push((p.clone(), j, mode));
            }
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_limit()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let items: Vec<BatchItem> = pool.install(|| {
        jobs.par_iter()
            .map(|(p, j, mode)| run_one(p, *j, mode, config.timing))
            .collect::<Result<Vec<_>>>()
    })?;
    let passed = items.iter().filter(|i| i.status == Status::Pass).count();
    Ok(BatchReport {
        schema: SCHEMA,
        sizes: sizes.to_vec(),
        summary: Summary {
            total: items.len(),
            passed,
            failed: items.len() - passed,
        },
        items,
    })
}
