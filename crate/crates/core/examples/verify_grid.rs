//! Runs every verification suite over a grid and prints the failures, if any.
//!
//! ```text
//! cargo run --release --example verify_grid -- "k=1..5,n=k+1..12"
//! ```

use grbetti::pipelines::{verify_suite, Grid, Suite};

fn main() -> grbetti::Result<()> {
    let grid: Grid = match std::env::args().nth(1) {
        Some(text) => text.parse()?,
        None => Grid::default(),
    };
    let report = verify_suite(&grid, &Suite::ALL);
    for suite in Suite::ALL {
        println!("{:<9} {:>4} checks", suite.as_str(), report.count(suite));
    }
    for f in report.failures() {
        println!("FAIL {}: {:?}", f.subject, f.detail);
    }
    println!(
        "{} checks, {} failures",
        report.checks.len(),
        report.failed()
    );
    Ok(())
}
