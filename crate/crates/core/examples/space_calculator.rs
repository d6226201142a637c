//! Evaluates space expressions given on the command line.
//!
//! ```text
//! cargo run --example space_calculator -- "blowup(P(3), P(1), 2)" "S(Gr(2,4),3) - M(Gr(2,4),3)"
//! ```

use grbetti::dsl;

fn main() {
    let mut exprs: Vec<String> = std::env::args().skip(1).collect();
    if exprs.is_empty() {
        exprs = [
            "P(2) * P(1)",
            "WP(1,2,2,3,3)",
            "F2(Gr(2,4))",
            "blowdown(blowup(P(2), P(0), 2), P(0), P(1))",
            "S(Gr(1,3),3)",
            "Gr(2 4)",
        ]
        .map(String::from)
        .to_vec();
    }
    for text in &exprs {
        match dsl::parse(text) {
            Ok(expr) => match dsl::eval(&expr) {
                Ok(p) => println!("{expr}\n  = {p}"),
                Err(e) => println!("{expr}\n  error: {e}"),
            },
            Err(e) => println!("{text}\n  {e}"),
        }
    }
}
