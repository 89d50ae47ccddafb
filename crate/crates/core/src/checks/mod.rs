//! Property suites shared by the acceptance test and `ghom check`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

mod af_checks;
mod sft_checks;
mod tower_checks;
mod zn_checks;

pub use af_checks::{af_vanishing, hopf2_transport, riesz_construction};
pub use sft_checks::{boundary_identity, designated_example, full_shift, index_homomorphism, oracle_equivalence};
pub use tower_checks::towers_exhaustive;
pub use zn_checks::zn_ratios;

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Wall-clock limit per full-shift case.
pub const FULL_SHIFT_LIMIT_SECS: f64 = 10.0;
/// Wall-clock limit for the exhaustive tower sweep.
pub const TOWERS_LIMIT_SECS: f64 = 60.0;
pub const FULL_SHIFT_DEPTH: usize = 6;
pub const ORACLE_DEPTH: usize = 8;
pub const ORACLE_MATRICES: usize = 20;
pub const INDEX_PAIRS: usize = 100;
pub const AF_RANDOM_DIAGRAMS: usize = 20;
pub const AF_MAX_LEVEL: usize = 4;
pub const HOPF2_PAIRS: usize = 50;
pub const RIESZ_INSTANCES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub criterion: u32,
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] {:>2} {} ({} cases): {}", self.criterion, self.name, self.cases, self.detail)
    }
}

/// Accumulates cases; the first few failures are kept for the detail line.
pub(crate) struct Tally {
    criterion: u32,
    name: &'static str,
    cases: usize,
    failed: usize,
    first_failures: Vec<String>,
    notes: Vec<String>,
}

const SHOWN_FAILURES: usize = 3;

impl Tally {
    pub(crate) fn new(criterion: u32, name: &'static str) -> Self {
        Tally { criterion, name, cases: 0, failed: 0, first_failures: Vec::new(), notes: Vec::new() }
    }

    pub(crate) fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.cases += 1;
        } else {
            self.fail(what());
        }
    }

    /// Counts `n` cases whose failures were already reported through `fail`.
    pub(crate) fn add_passed(&mut self, n: usize) {
        self.cases += n.saturating_sub(self.failed);
    }

    pub(crate) fn fail(&mut self, what: String) {
        self.cases += 1;
        self.failed += 1;
        if self.first_failures.len() < SHOWN_FAILURES {
            self.first_failures.push(what);
        }
    }

    pub(crate) fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    pub(crate) fn finish(self) -> CheckOutcome {
        let passed = self.failed == 0;
        let detail = if passed {
            self.notes.join("; ")
        } else {
            format!("{} failure(s): {}", self.failed, self.first_failures.join(" | "))
        };
        CheckOutcome { criterion: self.criterion, name: self.name.into(), passed, cases: self.cases, detail }
    }
}

pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed().as_secs_f64())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    FullShift,
    Oracle,
    Designated,
    Index,
    Boundary,
    AfH1,
    Hopf2,
    Towers,
    Zn,
    Riesz,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 11] =
        ["full-shift", "oracle", "designated", "index", "boundary", "af-h1", "hopf2", "towers", "zn", "riesz", "all"];

    pub fn run(self, seed: u64) -> Vec<CheckOutcome> {
        match self {
            Suite::FullShift => vec![full_shift()],
            Suite::Oracle => vec![oracle_equivalence(seed)],
            Suite::Designated => vec![designated_example()],
            Suite::Index => vec![index_homomorphism(seed)],
            Suite::Boundary => vec![boundary_identity(seed)],
            Suite::AfH1 => vec![af_vanishing(seed)],
            Suite::Hopf2 => vec![hopf2_transport(seed)],
            Suite::Towers => vec![towers_exhaustive()],
            Suite::Zn => vec![zn_ratios()],
            Suite::Riesz => vec![riesz_construction(seed)],
            Suite::All => Self::NAMES[..10].iter().flat_map(|n| n.parse::<Suite>().expect("listed").run(seed)).collect(),
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let all = [
            Suite::FullShift,
            Suite::Oracle,
            Suite::Designated,
            Suite::Index,
            Suite::Boundary,
            Suite::AfH1,
            Suite::Hopf2,
            Suite::Towers,
            Suite::Zn,
            Suite::Riesz,
            Suite::All,
        ];
        Self::NAMES
            .iter()
            .position(|&n| n == s)
            .map(|i| all[i])
            .ok_or_else(|| format!("unknown suite {s:?}; expected one of {}", Self::NAMES.join(", ")))
    }
}
