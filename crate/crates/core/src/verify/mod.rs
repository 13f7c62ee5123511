//! Property suites shared by the command-line driver and the acceptance
//! run. Each suite checks one family of constructions against brute-force
//! oracles and returns a report; timing is left to the caller so reports
//! stay reproducible.

pub mod gen;
mod suites;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use suites::*;

/// How hard to push. `Small` runs every suite at the stated bounds;
/// `Medium` and `Large` multiply the random trial counts and widen some
/// exhaustive ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Small,
    Medium,
    Large,
}

impl Budget {
    pub fn trials(self, base: usize) -> usize {
        base * match self {
            Budget::Small => 1,
            Budget::Medium => 3,
            Budget::Large => 10,
        }
    }
}

impl FromStr for Budget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "small" => Ok(Budget::Small),
            "medium" => Ok(Budget::Medium),
            "large" => Ok(Budget::Large),
            _ => Err(format!("unknown budget {s:?}; expected small, medium or large")),
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Budget::Small => "small",
            Budget::Medium => "medium",
            Budget::Large => "large",
        })
    }
}

/// Outcome of one suite. `failures` holds at most a handful of reproducing
/// inputs.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub checks: u64,
    pub violations: u64,
    pub detail: String,
    pub failures: Vec<String>,
}

pub(crate) const MAX_FAILURES: usize = 5;

pub(crate) struct Tally {
    checks: u64,
    violations: u64,
    failures: Vec<String>,
}

impl Tally {
    pub(crate) fn new() -> Self {
        Tally {
            checks: 0,
            violations: 0,
            failures: Vec::new(),
        }
    }

    pub(crate) fn check(&mut self, ok: bool, repro: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(repro());
            }
        }
    }

    pub(crate) fn report(self, id: usize, name: &'static str, detail: String) -> SuiteReport {
        SuiteReport {
            id,
            name,
            passed: self.violations == 0 && self.checks > 0,
            checks: self.checks,
            violations: self.violations,
            detail,
            failures: self.failures,
        }
    }
}

pub type Suite = fn(Budget, u64) -> SuiteReport;

/// The thirteen suites in order.
pub const SUITES: [(usize, &str, Suite); 13] = [
    (1, "phi strict increase", phi_strict_increase),
    (2, "salient inequality", salient_inequality),
    (3, "witness property", witness_property),
    (4, "depletion is a partial order", depletion_partial_order),
    (5, "depletion monotonicity and convex agreement", depletion_monotone),
    (6, "proper superset fixture", superset_fixture),
    (7, "full-interval star criterion", star_equivalence),
    (8, "amalgamation", amalgamation),
    (9, "dense-set entry and reduction", dense_and_reduction),
    (10, "generic embedding", generic_embedding),
    (11, "pipeline", pipeline),
    (12, "atomic transfer", atomic_transfer),
    (13, "true tie point", tie_point),
];
