//! Runs the built-in invariant suites, optionally with a custom guard.
//!
//! cargo run --release --example selftest -- [std_guard]

use nrcdt::experiment::{selftest, SelftestOptions};

fn main() {
    let mut opts = SelftestOptions::default();
    if let Some(g) = std::env::args().nth(1).and_then(|a| a.parse().ok()) {
        opts.std_guard = g;
    }
    let report = selftest(&opts);
    for s in &report.suites {
        println!("{:<5} {}: {}", if s.passed { "ok" } else { "FAIL" }, s.name, s.detail);
    }
    std::process::exit(if report.passed() { 0 } else { 1 });
}
