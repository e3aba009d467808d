//! Acceptance run: one PASS/FAIL line per criterion, thresholds from
//! `discrep::tolerances`.
//!
//! Criteria 5 and 8 are known to fail as stated; the README explains both.
//! They are still run and reported as FAIL. The target exits nonzero when any
//! other criterion fails, and says so when a known failure starts passing.

use std::process::ExitCode;

use discrep::verify::CRITERIA;

/// Criteria whose literal statement does not hold for the implemented formulas.
const KNOWN_FAILURES: [u8; 2] = [5, 8];

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    for criterion in &CRITERIA {
        let outcome = criterion.run();
        println!("{}", outcome.line());
        let known = KNOWN_FAILURES.contains(&outcome.id);
        if !outcome.passed {
            if let Some(check) = &outcome.check {
                for note in &check.notes {
                    println!("      {note}");
                }
            }
            if !known {
                unexpected.push(outcome.id);
            }
        }
        if outcome.passed && known {
            println!(
                "      criterion {} now passes; remove it from KNOWN_FAILURES",
                outcome.id
            );
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria outside {KNOWN_FAILURES:?} pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures {unexpected:?}");
        ExitCode::FAILURE
    }
}
