//! Acceptance battery: prints one pass/fail line per criterion.

use minred_core::battery::{run_all, BatteryConfig};

fn main() {
    let results = run_all(&BatteryConfig::default());
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
