//! Lines, planes and lines through a point on a Grassmannian.

use grbetti::catalog::{f1_gr, f2_gr, fx_gr, grassmannian, projective};

fn main() -> grbetti::Result<()> {
    for (k, n) in [(1, 4), (2, 4), (2, 5), (3, 6)] {
        let lines = f1_gr(k, n)?;
        let planes = f2_gr(k, n)?;
        let through_point = fx_gr(k, n)?;
        println!("Gr({k},{n}) = {}", grassmannian(k, n));
        println!("  F1   = {lines}");
        println!("  F2   = {planes}   ({} components)", planes.components());
        println!("  F1,x = {through_point}   (t = {})", n - 2);

        // incidence correspondence between points and pointed lines
        let lhs = through_point.times(&grassmannian(k, n));
        let rhs = projective(1).times(&lines);
        assert_eq!(lhs, rhs);
    }
    Ok(())
}
