//! Betti numbers of S and H for twisted cubics, computed by both routes.

use grbetti::pipelines::{h3, s2, s3, Mode};

fn main() -> grbetti::Result<()> {
    println!("conics, S(Gr(k,n),2)");
    for (k, n) in [(1, 3), (1, 4), (2, 4), (2, 5)] {
        let s = s2(k, n, Mode::Closed)?;
        assert_eq!(s, s2(k, n, Mode::Pipeline)?);
        println!("  Gr({k},{n}): {s}");
    }

    println!("twisted cubics");
    for (k, n) in [(1, 3), (1, 4), (1, 5), (2, 4), (2, 5)] {
        let s = s3(k, n, Mode::Closed)?;
        assert_eq!(s, s3(k, n, Mode::Pipeline)?);
        println!("  S(Gr({k},{n}),3): {s}");
        match h3(k, n, Mode::Closed) {
            Ok(h) => {
                assert_eq!(h, h3(k, n, Mode::Pipeline)?);
                println!("  H(Gr({k},{n}),3): {h}");
            }
            Err(e) => println!("  H(Gr({k},{n}),3): {e}"),
        }
    }
    Ok(())
}
