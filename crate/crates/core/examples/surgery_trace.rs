//! Replays the blow-up/blow-down chain from the Kontsevich space of twisted
//! cubics to the Simpson (and Hilbert) space, printing every intermediate
//! Poincaré polynomial.
//!
//! ```text
//! cargo run --example surgery_trace -- 2 5
//! ```

use grbetti::pipelines::{pipeline_for, Compactification, ModuliKey};

fn main() -> grbetti::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|s| s.parse::<i64>().expect("integer"));
    let k = args.next().unwrap_or(1);
    let n = args.next().unwrap_or(4);

    for c in [Compactification::S, Compactification::H] {
        let key = match ModuliKey::new(k, n, 3, c) {
            Ok(key) => key,
            Err(e) => {
                println!("{c}: {e}");
                continue;
            }
        };
        let pipeline = pipeline_for(&key)?.expect("S and H have surgery chains");
        let run = pipeline.run()?;
        println!("{key}");
        println!("  {:<7} {:<9} {}", "base", "", pipeline.base);
        for step in &run.trace {
            println!("  {:<7} {:<9} {}", step.label, step.kind, step.cumulative);
        }
        println!("  euler {}", run.result.euler());
    }
    Ok(())
}
