//! Runs every acceptance criterion at exact tolerance and prints one line each.

use std::process::ExitCode;
use std::time::Instant;

use ncforms::suite::{self, SuiteOptions};

fn main() -> ExitCode {
    let opts = SuiteOptions {
        heavy: true,
        ..SuiteOptions::default()
    };
    let mut failed = 0;
    for id in 1..=12 {
        let start = Instant::now();
        match suite::criterion(id, opts) {
            Ok(rep) => {
                let status = if rep.passed() { "PASS" } else { "FAIL" };
                println!(
                    "criterion {id:>2} {status}  {} ({} checks, {:.2?})",
                    rep.title,
                    rep.checks.len(),
                    start.elapsed()
                );
                for c in rep.failures() {
                    println!("    {}: expected {}, computed {}", c.name, c.expected, c.computed);
                }
                if !rep.passed() {
                    failed += 1;
                }
            }
            Err(e) => {
                println!("criterion {id:>2} FAIL  error: {e}");
                failed += 1;
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
