//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! `HESSFORM_SEED` overrides the default seed.

use std::process::ExitCode;
use std::time::Instant;

use hessform_core::verify::{run_criterion, DEFAULT_SEED};

fn main() -> ExitCode {
    let seed = std::env::var("HESSFORM_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    println!("acceptance suite, seed {seed}");
    let start = Instant::now();
    let mut failed = Vec::new();
    for criterion in 1..=15 {
        let outcome = run_criterion(criterion, seed).expect("registered criterion");
        println!("{}", outcome.summary_line());
        if !outcome.passed() {
            for r in outcome.results.iter().filter(|r| !r.passed()) {
                println!("       {} {}", r.name, r.detail.as_deref().unwrap_or(""));
            }
            failed.push(criterion);
        }
    }
    println!(
        "{} of 15 criteria passed in {:.1} s",
        15 - failed.len(),
        start.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
