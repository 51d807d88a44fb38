//! Runs the twelve acceptance criteria; one PASS/FAIL line each.

use std::process::ExitCode;

use slx::suite::{SuiteConfig, run_criterion};

fn main() -> ExitCode {
    slx::configure_threads();
    let cfg = SuiteConfig::default();
    let mut failed = 0;
    for id in 1..=12 {
        let res = run_criterion(id, &cfg);
        let tag = if res.passed { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {} [{:.1} s]: {}", res.id, res.title, res.seconds, res.detail);
        failed += usize::from(!res.passed);
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
