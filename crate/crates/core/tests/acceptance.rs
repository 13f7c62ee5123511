//! Runs every acceptance criterion once at the stated scale and prints one
//! line per criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ordlab::verify::{Budget, SUITES};

const SEED: u64 = 20240611;

/// Wall-clock limits in seconds, where one is stated.
fn limit(id: usize) -> Option<f64> {
    match id {
        1 => Some(1.0),
        2 => Some(5.0),
        3 => Some(10.0),
        4 => Some(60.0),
        7 => Some(120.0),
        10 => Some(60.0),
        13 => Some(10.0),
        _ => None,
    }
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut total = Duration::ZERO;
    for (id, name, suite) in SUITES {
        let start = Instant::now();
        let r = suite(Budget::Small, SEED);
        let took = start.elapsed();
        total += took;
        let secs = took.as_secs_f64();
        let in_time = limit(id).is_none_or(|l| secs <= l);
        let pass = r.passed && in_time;
        if !pass {
            failed += 1;
        }
        let budget = limit(id).map_or(String::new(), |l| format!(" (limit {l} s)"));
        println!(
            "criterion {id:>2} {:<4} {name}: {} checks, {} violations, {secs:.2} s{budget}",
            if pass { "PASS" } else { "FAIL" },
            r.checks,
            r.violations
        );
        println!("    {}", r.detail);
        if !in_time {
            println!("    over the time limit");
        }
        for f in &r.failures {
            println!("    counterexample: {f}");
        }
    }
    println!(
        "{} of {} criteria passed in {:.1} s",
        SUITES.len() - failed,
        SUITES.len(),
        total.as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
