//! Kontsevich spaces of conics and twisted cubics from the closed forms.

use grbetti::catalog::martin_m;
use grbetti::pipelines::dim_expected;

fn main() -> grbetti::Result<()> {
    for d in [2, 3] {
        println!("degree {d}");
        for (k, n) in [(1, 3), (1, 4), (2, 4), (2, 5), (3, 6)] {
            let m = martin_m(k, n, d)?;
            println!(
                "  M(Gr({k},{n}),{d})  dim {:>2} (expected {:>2})  euler {:>8}  palindromic {}",
                m.dim().unwrap_or(0),
                dim_expected(k, n, d),
                m.euler(),
                m.is_palindromic()
            );
        }
    }
    Ok(())
}
