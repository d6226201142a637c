//! Poincaré polynomials of Grassmannians as Gaussian binomials.
//!
//! ```text
//! cargo run --example gaussian_binomials -- 6
//! ```

use grbetti::catalog::grassmannian;

fn main() {
    let n: i64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("n must be an integer"))
        .unwrap_or(5);

    for k in 0..=n {
        let g = grassmannian(k, n);
        println!(
            "Gr({k},{n})  dim {:>2}  euler {:>4}  P = {g}",
            g.dim().unwrap_or(0),
            g.euler()
        );
    }

    // out-of-range Grassmannians are the empty space, not an error
    println!("Gr(-1,{n}) = {}", grassmannian(-1, n));
}
