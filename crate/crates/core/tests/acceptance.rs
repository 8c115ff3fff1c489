//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! Criterion 13 tracks open conjectures: its status is printed but does not
//! fail the run.

use std::process::ExitCode;

use gessel_core::sampling::DEFAULT_SEED;
use gessel_core::suite::{Suite, SuiteConfig};

fn main() -> ExitCode {
    let mut suite = Suite::new(SuiteConfig::full(DEFAULT_SEED));
    let mut failed = 0;
    for id in 1..=13 {
        let res = suite.run(id);
        println!("{}", res.summary());
        if !res.pass() {
            for rep in res.reports.iter().filter(|r| !r.pass) {
                println!("    {rep}");
            }
            if !res.informational {
                failed += 1;
            }
        }
    }
    println!("acceptance: {} of 13 criteria failing", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
